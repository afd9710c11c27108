#include "plexplain/explain.h"

#include "plexplain/errors.h"

#include <json.hpp>

#include <algorithm>
#include <set>
#include <sstream>

using namespace std;
using json = nlohmann::json;

namespace plexplain {
string to_string(Explanation::Status status) {
    switch (status) {
    case Explanation::Status::explained: return "explained";
    case Explanation::Status::solvable_root: return "solvable-root";
    case Explanation::Status::unsolvable_at_top: return "unsolvable-at-top";
    }
    return "?";
}

static vector<string> string_list(const json &j, const char *what) {
    if (!j.is_array())
        throw InputError(string(what) + " must be a list of strings");
    vector<string> result;
    for (const json &x : j) {
        if (!x.is_string())
            throw InputError(string(what) + " must be a list of strings");
        result.push_back(x.get<string>());
    }
    return result;
}

LatticeSpec parse_lattice_spec(string_view text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error &e) {
        throw InputError(string("lattice spec is not valid JSON: ") + e.what());
    }
    if (!doc.is_object() || !doc.contains("groups") || !doc["groups"].is_array())
        throw InputError("lattice spec needs a \"groups\" list");
    LatticeSpec spec;
    for (const json &g : doc["groups"]) {
        if (!g.is_object() || !g.contains("name") || !g["name"].is_string())
            throw InputError("every lattice group needs a \"name\"");
        GroupSpec group;
        group.name = g["name"].get<string>();
        if (g.contains("predicates"))
            group.predicates = string_list(g["predicates"], "group predicates");
        if (g.contains("fluents"))
            group.fluents = string_list(g["fluents"], "group fluents");
        if (group.predicates.empty() && group.fluents.empty())
            throw InputError("group " + group.name + " lists no predicates or fluents");
        spec.groups.push_back(move(group));
    }
    if (doc.contains("forbidden")) {
        if (!doc["forbidden"].is_array())
            throw InputError("\"forbidden\" must be a list of group-name lists");
        for (const json &f : doc["forbidden"])
            spec.forbidden.push_back(string_list(f, "forbidden combination"));
    }
    return spec;
}

vector<FluentGroup> resolve_groups(const LatticeSpec &spec, const PlanningModel &m,
                                   const FluentSet &excluded) {
    const FluentTable &table = m.table();
    vector<FluentGroup> groups;
    for (const GroupSpec &g : spec.groups) {
        set<string> predicates(g.predicates.begin(), g.predicates.end());
        vector<FluentId> members;
        for (FluentId id : m.fluents().to_vector()) {
            if (excluded.contains(id))
                continue;
            if (predicates.count(table[id].base_predicate()))
                members.push_back(id);
        }
        for (const string &name : g.fluents) {
            auto id = table.find_display(name);
            if (!id || !m.fluents().contains(*id) || excluded.contains(*id))
                throw InputError("group " + g.name + " names unknown fluent " + name);
            members.push_back(*id);
        }
        members = sorted_unique(move(members));
        if (members.empty())
            throw InputError("group " + g.name + " matches no fluent of the model");
        groups.push_back({g.name, move(members)});
    }
    return groups;
}

ValidationTrace exemplar_failure(const AbstractionLattice &lat, const LatticeNode &abs,
                                 const PlanningModel &conc, const FluentSet &focus) {
    if (!lat.solvable(abs))
        throw PreconditionError("exemplar needs a solvable abstract node");
    ValidationTrace trace = validate_plan(conc, lat.solve(abs).plan);
    if (trace.unsatisfied && !focus.empty()) {
        vector<FluentId> focused;
        for (FluentId p : *trace.unsatisfied)
            if (focus.contains(p))
                focused.push_back(p);
        if (!focused.empty())
            trace.unsatisfied = focused;
    }
    return trace;
}

namespace {
class Pipeline {
    const AbstractionLattice &lat;
    const ExplainOptions &options;
    const ConstrainedModel *constrained;
    Explanation result;

    string formula_text(const DnfFormula &phi) const {
        return to_string(phi, lat.root_model().table());
    }

    FailedReport report(const FailedSubgoal &fs, const LandmarkGraph &lg,
                        const LatticeNode &level) const {
        FailedReport r;
        r.formula = formula_text(fs.formula);
        for (size_t id : fs.achieved_prefix)
            r.prefix.push_back(formula_text(lg.landmark(id).formula));
        r.level = level.projected();
        r.final_goal = fs.is_final_goal();
        return r;
    }

    void add_warnings(const vector<string> &warnings) {
        for (const string &w : warnings)
            if (find(result.warnings.begin(), result.warnings.end(), w) == result.warnings.end())
                result.warnings.push_back(w);
    }

    Plan display_plan(const Plan &plan) const {
        return constrained ? strip_meta(*constrained, plan) : plan;
    }

    // The failed subgoal's compiled model must be unsolvable at its level.
    void verify_failure(const PlanningModel &level, const LandmarkGraph &lg,
                        const FailedSubgoal &fs, bool headline) const {
        LandmarkGraph graph = lg;
        size_t target;
        if (fs.landmark)
            target = *fs.landmark;
        else
            graph = with_goal_landmark(lg, level, target);
        AchievabilityModel am = compile_achievability(level, graph, target,
                                                      options.achievability);
        if (headline && options.on_compiled)
            options.on_compiled("failed-subgoal", am.model);
        SearchResult r = decide_solvable(am.model, lat.limits());
        if (r.exhausted())
            throw ResourceExhausted("self-check of the failed subgoal hit the " + r.limit);
        if (r.solvable())
            throw logic_error("self-check failed: subgoal " + formula_text(fs.formula) +
                              " is achievable at the explanatory level");
    }

    // Automaton bookkeeping fluents are landmarks of the constrained model
    // but say nothing to the user.
    LandmarkGraph user_landmarks(const LandmarkGraph &lg) const {
        if (!constrained)
            return lg;
        FluentSet automaton(lat.root_model().table().size());
        for (FluentId q : constrained->in_state)
            automaton.insert(q);
        automaton.insert(constrained->goal_accept);
        return drop_landmarks(lg, [&](const Landmark &l) {
            for (FluentId p : l.formula.fluents())
                if (automaton.contains(p))
                    return true;
            return false;
        });
    }

    LandmarkGraph top_landmarks(const LatticeNode &top) const {
        if (constrained) {
            // Landmarks of the advice-free model at the same abstraction.
            const PlanningModel &base = constrained->base;
            FluentSet members(base.table().size());
            for (FluentId p : lat.members_of(top.mask()).to_vector())
                if (p < base.table().size())
                    members.insert(p);
            PlanningModel base_top = project_model(base, members);
            SearchResult r = decide_solvable(base_top, lat.limits());
            if (r.exhausted())
                throw ResourceExhausted("solvability check of the advice-free top hit the " +
                                        r.limit);
            if (r.solvable())
                return extract_landmarks(base_top, {false});
        }
        return goal_landmarks(top.model());
    }

    void unsolvable_at_top() {
        result.status = Explanation::Status::unsolvable_at_top;
        const LatticeNode &top = *lat.maximal_nodes().front();
        LandmarkGraph lg = top_landmarks(top);
        FailedSubgoal fs = first_unachievable(top.model(), lg, linearize(lg), lat.limits(),
                                              options.achievability);
        add_warnings(fs.warnings);
        result.failed = report(fs, lg, top);
    }

    bool wants_exemplar(const DnfFormula &phi) const {
        switch (options.exemplar) {
        case ExemplarMode::always: return true;
        case ExemplarMode::never: return false;
        case ExemplarMode::automatic: return phi.size() > 1 || phi.max_conjunct_size() > 3;
        }
        return false;
    }

public:
    Pipeline(const AbstractionLattice &lat, const ExplainOptions &options,
             const ConstrainedModel *constrained)
        : lat(lat), options(options), constrained(constrained) {
        result.advice_applied = constrained != nullptr;
    }

    Explanation run() {
        const LatticeNode &root = lat.root();
        if (lat.solvable(root)) {
            result.status = Explanation::Status::solvable_root;
            result.plan = display_plan(lat.solve(root).plan);
            return result;
        }
        vector<const LatticeNode *> minimum = minimum_abstraction_set(lat);
        if (minimum.empty()) {
            unsolvable_at_top();
            return result;
        }

        ExplanatorySet e = find_explanatory_fluents(lat);
        const FluentTable &table = lat.root_model().table();
        result.groups = e.groups;
        result.cost = e.cost;
        for (const ModelUpdate &u : e.updates)
            result.updates.push_back({to_string(u.kind), u.action, table.display(u.fluent)});
        GroupMask restored = lat.mask_of(e.groups);

        for (size_t i = 0; i < minimum.size(); ++i) {
            const LatticeNode &m = *minimum[i];
            const LatticeNode &level = lat.node(m.mask() & ~restored);
            if (lat.solvable(level))
                throw logic_error("self-check failed: concretized node is solvable");
            LandmarkGraph lg = user_landmarks(extract_landmarks(m.model(), {false}));
            FailedSubgoal fs = first_unachievable(level.model(), lg, linearize(lg),
                                                  lat.limits(), options.achievability);
            verify_failure(level.model(), lg, fs, i == 0);
            add_warnings(fs.warnings);
            FailedReport r = report(fs, lg, level);
            if (i == 0) {
                result.failed = r;
                if (wants_exemplar(fs.formula)) {
                    ValidationTrace trace = exemplar_failure(lat, m, level.model(),
                                                             lat.members_of(restored));
                    if (!trace.valid()) {
                        Exemplar ex{lat.solve(m).plan, trace.failing_index, {}};
                        for (FluentId p : trace.unsatisfied.value_or(vector<FluentId>{}))
                            ex.missing.push_back(table.display(p));
                        result.exemplar = ex;
                    }
                }
            } else {
                result.secondary.push_back(r);
            }
        }
        return result;
    }
};
}

Explanation explain_lattice(const AbstractionLattice &lat, const ConstrainedModel *constrained,
                            const ExplainOptions &options) {
    return Pipeline(lat, options, constrained).run();
}

Explanation explain(const PlanningModel &m, const LatticeSpec &spec,
                    const optional<ConstraintFSA> &advice, const ExplainOptions &options) {
    if (!advice) {
        AbstractionLattice lat(m, resolve_groups(spec, m), spec.forbidden, options.limits);
        return explain_lattice(lat, nullptr, options);
    }
    ConstrainedModel cm = compose(m, *advice);
    if (options.on_compiled)
        options.on_compiled("constrained", cm.compiled);
    FluentSet excluded(cm.compiled.table().size());
    for (FluentId q : cm.in_state)
        excluded.insert(q);
    excluded.insert(cm.goal_accept);
    AbstractionLattice lat(cm.compiled, resolve_groups(spec, cm.compiled, excluded),
                           spec.forbidden, options.limits);
    return explain_lattice(lat, &cm, options);
}

static json failed_json(const FailedReport &f) {
    return {{"formula", f.formula},
            {"prefix", f.prefix},
            {"level", {{"projected", f.level}}},
            {"final_goal", f.final_goal}};
}

static FailedReport failed_from(const json &j) {
    FailedReport f;
    f.formula = j.at("formula").get<string>();
    f.prefix = j.at("prefix").get<vector<string>>();
    f.level = j.at("level").at("projected").get<vector<string>>();
    f.final_goal = j.value("final_goal", false);
    return f;
}

string render_json(const Explanation &e) {
    json doc;
    doc["status"] = to_string(e.status);
    if (e.status == Explanation::Status::explained) {
        json updates = json::array();
        for (const RenderedUpdate &u : e.updates)
            updates.push_back({{"kind", u.kind},
                               {"action", u.action ? json(*u.action) : json(nullptr)},
                               {"fluent", u.fluent}});
        doc["explanatory"] = {{"groups", e.groups}, {"cost", e.cost}, {"updates", updates}};
    } else {
        doc["explanatory"] = nullptr;
    }
    doc["failed"] = e.failed ? failed_json(*e.failed) : json(nullptr);
    doc["secondary"] = json::array();
    for (const FailedReport &f : e.secondary)
        doc["secondary"].push_back(failed_json(f));
    if (e.exemplar) {
        doc["exemplar"] = {{"plan", e.exemplar->plan.actions},
                           {"failing_index", e.exemplar->failing_index
                                                 ? json(*e.exemplar->failing_index)
                                                 : json(nullptr)},
                           {"missing", e.exemplar->missing}};
    } else {
        doc["exemplar"] = nullptr;
    }
    doc["plan"] = e.plan ? json(e.plan->actions) : json(nullptr);
    doc["advice_applied"] = e.advice_applied;
    doc["warnings"] = e.warnings;
    return doc.dump(2) + "\n";
}

Explanation parse_explanation_json(string_view text) {
    Explanation e;
    try {
        json doc = json::parse(text);
        string status = doc.at("status").get<string>();
        bool known = false;
        for (auto s : {Explanation::Status::explained, Explanation::Status::solvable_root,
                       Explanation::Status::unsolvable_at_top})
            if (to_string(s) == status) {
                e.status = s;
                known = true;
            }
        if (!known)
            throw InputError("unknown explanation status " + status);
        const json &x = doc.at("explanatory");
        if (!x.is_null()) {
            e.groups = x.at("groups").get<vector<string>>();
            e.cost = x.at("cost").get<size_t>();
            for (const json &u : x.at("updates")) {
                RenderedUpdate r{u.at("kind").get<string>(), nullopt,
                                 u.at("fluent").get<string>()};
                if (!u.at("action").is_null())
                    r.action = u.at("action").get<string>();
                e.updates.push_back(move(r));
            }
        }
        if (!doc.at("failed").is_null())
            e.failed = failed_from(doc["failed"]);
        for (const json &f : doc.value("secondary", json::array()))
            e.secondary.push_back(failed_from(f));
        const json &ex = doc.at("exemplar");
        if (!ex.is_null()) {
            Exemplar exemplar{Plan{ex.at("plan").get<vector<string>>()}, nullopt,
                              ex.at("missing").get<vector<string>>()};
            if (!ex.at("failing_index").is_null())
                exemplar.failing_index = ex["failing_index"].get<size_t>();
            e.exemplar = exemplar;
        }
        if (doc.contains("plan") && !doc["plan"].is_null())
            e.plan = Plan{doc["plan"].get<vector<string>>()};
        e.advice_applied = doc.at("advice_applied").get<bool>();
        e.warnings = doc.value("warnings", vector<string>{});
    } catch (const json::exception &err) {
        throw InputError(string("malformed explanation: ") + err.what());
    }
    return e;
}

string render_landmarks_json(const LandmarkGraph &g, const FluentTable &table) {
    json doc;
    doc["landmarks"] = json::array();
    for (const Landmark &l : g.landmarks)
        doc["landmarks"].push_back({{"id", l.id},
                                    {"formula", to_string(l.formula, table)},
                                    {"goal", l.is_goal_conjunct},
                                    {"initially_true", l.initially_true}});
    doc["orderings"] = json::array();
    for (const Ordering &o : g.orderings)
        doc["orderings"].push_back({{"from", o.from}, {"to", o.to}, {"kind", to_string(o.kind)}});
    return doc.dump(2) + "\n";
}

static string plan_text(const Plan &plan) {
    if (plan.empty())
        return "the empty plan";
    string s;
    for (const string &a : plan.actions)
        s += (s.empty() ? "" : ", ") + a;
    return s;
}

static string list_text(const vector<string> &items) {
    if (items.empty())
        return "nothing";
    string s;
    for (const string &x : items)
        s += (s.empty() ? "" : ", ") + x;
    return s;
}

static void render_failed(ostringstream &out, const FailedReport &f) {
    if (f.final_goal)
        out << "Every intermediate subgoal can be reached, but the goal itself cannot: "
            << f.formula << " (after achieving: " << list_text(f.prefix) << ")\n";
    else
        out << "The following subgoal, required by every solution, cannot be achieved: "
            << f.formula << " (after achieving: " << list_text(f.prefix) << ")\n";
}

string render_human(const Explanation &e) {
    ostringstream out;
    if (e.status == Explanation::Status::solvable_root) {
        out << "The problem is solvable" << (e.advice_applied ? " under the given advice" : "")
            << ". Plan: " << plan_text(e.plan.value_or(Plan{})) << "\n";
        return out.str();
    }
    out << "The problem has no solution" << (e.advice_applied ? " that follows the advice" : "")
        << ".\n";
    if (e.status == Explanation::Status::unsolvable_at_top) {
        out << "It stays unsolvable even when every fluent group is ignored, so no model "
               "detail explains it.\n";
    } else {
        out << "\nDetails you may have overlooked (" << list_text(e.groups) << "; "
            << e.cost << (e.cost == 1 ? " model update" : " model updates") << "):\n";
        vector<string> init, goal;
        vector<pair<string, vector<string>>> by_action;
        for (const RenderedUpdate &u : e.updates) {
            if (u.kind == "init-literal") {
                init.push_back(u.fluent);
            } else if (u.kind == "goal-literal") {
                goal.push_back(u.fluent);
            } else {
                string what = u.kind.substr(0, u.kind.size() - string("-literal").size());
                string entry = what + " " + u.fluent;
                if (by_action.empty() || by_action.back().first != *u.action)
                    by_action.push_back({*u.action, {}});
                by_action.back().second.push_back(entry);
            }
        }
        if (!init.empty())
            out << "  initial state: " << list_text(init) << "\n";
        if (!goal.empty())
            out << "  goal: " << list_text(goal) << "\n";
        const size_t shown = 10;
        for (size_t i = 0; i < by_action.size() && i < shown; ++i)
            out << "  action " << by_action[i].first << ": " << list_text(by_action[i].second)
                << "\n";
        if (by_action.size() > shown)
            out << "  ... and " << by_action.size() - shown
                << " more actions (the JSON output lists all of them)\n";
        out << "\n";
    }
    if (e.failed)
        render_failed(out, *e.failed);
    if (!e.secondary.empty()) {
        out << "\nOther abstractions point at:\n";
        for (const FailedReport &f : e.secondary) {
            out << "  [" << list_text(f.level) << "] ";
            ostringstream line;
            render_failed(line, f);
            out << line.str();
        }
    }
    if (e.exemplar) {
        const Exemplar &x = *e.exemplar;
        out << "\nExample: the plan " << plan_text(x.plan)
            << " works when those details are ignored, but ";
        if (x.failing_index && *x.failing_index < x.plan.size())
            out << "step " << *x.failing_index + 1 << " (" << x.plan.actions[*x.failing_index]
                << ") needs " << list_text(x.missing) << ".\n";
        else
            out << "it ends without reaching " << list_text(x.missing) << ".\n";
    }
    for (const string &w : e.warnings)
        out << "warning: " << w << "\n";
    return out.str();
}
}
