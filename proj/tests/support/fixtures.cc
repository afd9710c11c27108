#include "fixtures.h"

#include "plexplain/errors.h"
#include "plexplain/pddl.h"
#include "plexplain/search.h"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#ifndef PLEXPLAIN_DATA_DIR
#define PLEXPLAIN_DATA_DIR "data"
#endif

using namespace std;

namespace plexplain::testing {
string data_path(const string &relative) {
    return string(PLEXPLAIN_DATA_DIR) + "/" + relative;
}

string read_text(const string &path) {
    ifstream in(path);
    if (!in)
        throw InputError("cannot read " + path);
    ostringstream out;
    out << in.rdbuf();
    return out.str();
}

static pair<string, vector<string>> split_display(const string &display) {
    vector<string> parts;
    string current;
    for (char c : display) {
        if (c == '_') {
            parts.push_back(current);
            current.clear();
        } else {
            current += c;
        }
    }
    parts.push_back(current);
    string name = parts.front();
    parts.erase(parts.begin());
    return {name, parts};
}

PlanningModel build_model(const vector<string> &fluents, const vector<ActionSpec> &actions,
                          const vector<string> &init, const vector<string> &goal) {
    auto table = make_shared<FluentTable>();
    for (const string &f : fluents) {
        auto [name, args] = split_display(f);
        table->intern(name, args);
    }
    auto ids = [&](const vector<string> &names) {
        vector<FluentId> result;
        for (const string &n : names) {
            auto id = table->find_display(n);
            if (!id)
                throw InputError("fixture names unknown fluent " + n);
            result.push_back(*id);
        }
        return result;
    };
    vector<Action> built;
    for (const ActionSpec &a : actions)
        built.push_back({a.name, ids(a.prec), {{{}, ids(a.add), ids(a.del)}}});
    FluentSet all(table->size());
    for (FluentId id = 0; id < table->size(); ++id)
        all.insert(id);
    State s(table->size(), ids(init));
    return PlanningModel(table, all, built, s, ids(goal));
}

FluentId fluent(const PlanningModel &m, const string &display) {
    auto id = m.table().find_display(display);
    if (!id)
        throw InputError("unknown fluent " + display);
    return *id;
}

DnfFormula atom(const PlanningModel &m, const string &display) {
    return DnfFormula::atom(fluent(m, display));
}

DnfFormula any_of(const PlanningModel &m, const vector<string> &displays) {
    vector<vector<FluentId>> disjuncts;
    for (const string &d : displays)
        disjuncts.push_back({fluent(m, d)});
    return DnfFormula(disjuncts);
}

FluentSet fluent_set(const PlanningModel &m, const vector<string> &displays) {
    FluentSet s(m.table().size());
    for (const string &d : displays)
        s.insert(fluent(m, d));
    return s;
}

PlanningModel minirover_a() {
    return load_model(read_text(data_path("minirover/domain.pddl")),
                      read_text(data_path("minirover/problem.pddl")));
}

PlanningModel minirover_norocks() {
    PlanningModel a = minirover_a();
    return project_model(a, fluent_set(a, {"clear_l2", "clear_l3"}));
}

PlanningModel two_path() {
    return build_model(
        {"at_l1", "at_l2", "at_l3", "at_l4", "conn_l1_l2", "conn_l1_l3", "conn_l2_l4",
         "conn_l3_l4"},
        {{"move_l1_l2", {"at_l1", "conn_l1_l2"}, {"at_l2"}, {"at_l1"}},
         {"move_l1_l3", {"at_l1", "conn_l1_l3"}, {"at_l3"}, {"at_l1"}},
         {"move_l2_l4", {"at_l2", "conn_l2_l4"}, {"at_l4"}, {"at_l2"}},
         {"move_l3_l4", {"at_l3", "conn_l3_l4"}, {"at_l4"}, {"at_l3"}}},
        {"at_l1", "conn_l1_l2", "conn_l1_l3", "conn_l2_l4", "conn_l3_l4"}, {"at_l4"});
}

PlanningModel jointly_blocked() {
    return build_model({"fuel", "done_a", "done_b"},
                       {{"make_a", {"fuel"}, {"done_a"}, {"fuel"}},
                        {"make_b", {"fuel"}, {"done_b"}, {"fuel"}}},
                       {"fuel"}, {"done_a", "done_b"});
}

vector<FluentGroup> groups_by_predicate(const PlanningModel &m,
                                        const vector<string> &predicates) {
    LatticeSpec spec;
    for (const string &p : predicates)
        spec.groups.push_back({p, {p}, {}});
    return resolve_groups(spec, m);
}

namespace {
struct Draw {
    vector<string> fluents;
    vector<string> grouped;
    vector<string> predicates;
    vector<ActionSpec> actions;
    vector<string> init;
    vector<string> goal;
};

template<typename T>
T pick(mt19937 &rng, const vector<T> &items) {
    return items[uniform_int_distribution<size_t>(0, items.size() - 1)(rng)];
}

vector<string> sample(mt19937 &rng, vector<string> items, size_t k) {
    shuffle(items.begin(), items.end(), rng);
    items.resize(min(k, items.size()));
    return items;
}

Draw draw_model(mt19937 &rng) {
    Draw d;
    auto uniform = [&](int lo, int hi) {return uniform_int_distribution<int>(lo, hi)(rng);};
    int num_groups = uniform(2, 4);
    for (int g = 0; g < num_groups; ++g) {
        string predicate = "g" + std::to_string(g);
        d.predicates.push_back(predicate);
        int members = uniform(1, 2);
        for (int i = 0; i < members; ++i) {
            d.fluents.push_back(predicate + "_" + std::to_string(i));
            d.grouped.push_back(d.fluents.back());
        }
    }
    int base = uniform(2, int(min<size_t>(5, 12 - d.fluents.size())));
    for (int i = 0; i < base; ++i)
        d.fluents.push_back("b_" + std::to_string(i));

    bernoulli_distribution coin(0.4);
    int num_actions = uniform(3, 8);
    for (int a = 0; a < num_actions; ++a) {
        ActionSpec spec;
        spec.name = "a" + std::to_string(a);
        spec.prec = sample(rng, d.fluents, uniform(1, 3));
        vector<string> rest;
        for (const string &f : d.fluents)
            if (find(spec.prec.begin(), spec.prec.end(), f) == spec.prec.end())
                rest.push_back(f);
        spec.add = sample(rng, rest, uniform(1, 2));
        for (const string &p : spec.prec)
            if (coin(rng))
                spec.del.push_back(p);
        d.actions.push_back(move(spec));
    }
    for (const string &f : d.fluents)
        if (coin(rng))
            d.init.push_back(f);
    vector<string> open;
    for (const string &f : d.fluents)
        if (find(d.init.begin(), d.init.end(), f) == d.init.end())
            open.push_back(f);
    if (!open.empty())
        d.goal = sample(rng, open, uniform(1, 2));
    return d;
}

PlanningModel build(const Draw &d) {
    return build_model(d.fluents, d.actions, d.init, d.goal);
}

bool solvable(const PlanningModel &m) {
    return decide_solvable(m).solvable();
}

LatticeSpec spec_of(const Draw &d) {
    LatticeSpec spec;
    for (const string &p : d.predicates)
        spec.groups.push_back({p, {p}, {}});
    return spec;
}

optional<Draw> solvable_draw(mt19937 &rng) {
    for (int attempt = 0; attempt < 200; ++attempt) {
        Draw d = draw_model(rng);
        if (d.goal.empty())
            continue;
        if (solvable(build(d)))
            return d;
    }
    return nullopt;
}
}

optional<MicroCase> random_micro_case(mt19937 &rng, bool use_advice) {
    optional<Draw> found = solvable_draw(rng);
    if (!found)
        return nullopt;
    Draw d = *found;
    if (!use_advice) {
        // Delete grouped fluents from I or from add effects until unsolvable.
        for (int attempt = 0; attempt < 12; ++attempt) {
            Draw changed = d;
            string f = pick(rng, d.grouped);
            if (bernoulli_distribution(0.5)(rng)) {
                auto &init = changed.init;
                init.erase(remove(init.begin(), init.end(), f), init.end());
            } else {
                for (ActionSpec &a : changed.actions)
                    a.add.erase(remove(a.add.begin(), a.add.end(), f), a.add.end());
            }
            for (ActionSpec &a : changed.actions)
                if (a.add.empty())
                    a.add.push_back(pick(rng, d.fluents));
            d = changed;
            PlanningModel m = build(d);
            if (!solvable(m))
                return MicroCase{"deletion", m, spec_of(d), nullopt};
        }
        return nullopt;
    }
    PlanningModel m = build(d);
    Plan plan = decide_solvable(m).plan;
    for (int attempt = 0; attempt < 12; ++attempt) {
        ConstraintFSA fsa;
        string label;
        int kind = uniform_int_distribution<int>(0, 2)(rng);
        if (kind == 0 && !plan.empty()) {
            string a = pick(rng, plan.actions);
            fsa = never_use_action(m, a);
            label = "never-use " + a;
        } else if (kind == 1) {
            string f = pick(rng, d.grouped);
            fsa = never_holds(m, atom(m, f));
            label = "never-holds " + f;
        } else {
            string f = pick(rng, d.fluents);
            fsa = eventually_holds(m, atom(m, f));
            label = "eventually-holds " + f;
        }
        ConstrainedModel cm = compose(m, fsa);
        if (!solvable(cm.compiled))
            return MicroCase{"advice " + label, m, spec_of(d), fsa};
    }
    return nullopt;
}

vector<pair<string, PlanningModel>> solvable_fixtures(size_t random_count, unsigned seed) {
    vector<pair<string, PlanningModel>> result;
    result.push_back({"minirover-norocks", minirover_norocks()});
    result.push_back({"two-path", two_path()});
    mt19937 rng(seed);
    while (result.size() < random_count + 2) {
        optional<Draw> d = solvable_draw(rng);
        if (d)
            result.push_back({"random-" + std::to_string(result.size() - 2), build(*d)});
    }
    return result;
}
}
