#include "plexplain/advice.h"

#include "plexplain/errors.h"
#include "plexplain/pddl.h"

#include <json.hpp>

#include <algorithm>
#include <deque>
#include <set>

using namespace std;
using json = nlohmann::json;

namespace plexplain {
bool ConstraintFSA::is_accepting(size_t s) const {
    return find(accepting.begin(), accepting.end(), s) != accepting.end();
}

void ConstraintFSA::check() const {
    if (states.empty())
        throw InputError("automaton has no states");
    if (initial >= states.size())
        throw InputError("automaton initial state out of range");
    for (size_t s : accepting)
        if (s >= states.size())
            throw InputError("automaton accepting state out of range");
    for (const FsaTransition &t : transitions)
        if (t.from >= states.size() || t.to >= states.size())
            throw InputError("automaton transition refers to an unknown state");
    set<string> names(states.begin(), states.end());
    if (names.size() != states.size())
        throw InputError("automaton state names are not unique");
}

bool ConstraintFSA::can_accept() const {
    vector<bool> seen(states.size(), false);
    vector<size_t> stack{initial};
    seen[initial] = true;
    while (!stack.empty()) {
        size_t s = stack.back();
        stack.pop_back();
        if (is_accepting(s))
            return true;
        for (const FsaTransition &t : transitions)
            if (t.from == s && !seen[t.to]) {
                seen[t.to] = true;
                stack.push_back(t.to);
            }
    }
    return false;
}

static vector<string> numbered_states(size_t n) {
    vector<string> names;
    for (size_t i = 0; i < n; ++i)
        names.push_back("q" + std::to_string(i));
    return names;
}

static void loop_on_actions(ConstraintFSA &f, const PlanningModel &m, size_t from, size_t to,
                            const string &except = "") {
    for (const Action &a : m.actions())
        if (a.name != except)
            f.transitions.push_back({from, TransitionLabel::on_action(a.name), to});
}

static void require_action(const PlanningModel &m, const string &action) {
    if (!m.find_action(action))
        throw InputError("advice refers to unknown action " + action);
}

ConstraintFSA universal_fsa(const PlanningModel &m) {
    ConstraintFSA f{numbered_states(1), 0, {0}, {}};
    loop_on_actions(f, m, 0, 0);
    return f;
}

ConstraintFSA never_use_action(const PlanningModel &m, const string &action) {
    require_action(m, action);
    ConstraintFSA f{numbered_states(1), 0, {0}, {}};
    loop_on_actions(f, m, 0, 0, action);
    return f;
}

ConstraintFSA use_action_eventually(const PlanningModel &m, const string &action) {
    require_action(m, action);
    ConstraintFSA f{numbered_states(2), 0, {1}, {}};
    loop_on_actions(f, m, 0, 0, action);
    f.transitions.push_back({0, TransitionLabel::on_action(action), 1});
    loop_on_actions(f, m, 1, 1);
    return f;
}

ConstraintFSA eventually_holds(const PlanningModel &m, const DnfFormula &phi) {
    ConstraintFSA f{numbered_states(2), 0, {1}, {}};
    loop_on_actions(f, m, 0, 0);
    f.transitions.push_back({0, TransitionLabel::on_guard(phi), 1});
    loop_on_actions(f, m, 1, 1);
    return f;
}

ConstraintFSA never_holds(const PlanningModel &m, const DnfFormula &phi) {
    // q0: state not yet checked; q1: checked, free to act.
    ConstraintFSA f{numbered_states(2), 0, {1}, {}};
    f.transitions.push_back({0, TransitionLabel::on_guard(phi, true), 1});
    loop_on_actions(f, m, 1, 0);
    return f;
}

ConstraintFSA before(const PlanningModel &m, const DnfFormula &p, const DnfFormula &q) {
    // q0 unchecked, q1 checked (q false so far), q2 p seen in time.
    ConstraintFSA f{numbered_states(3), 0, {1, 2}, {}};
    f.transitions.push_back({0, TransitionLabel::on_guard(q, true), 1});
    f.transitions.push_back({1, TransitionLabel::on_guard(p), 2});
    loop_on_actions(f, m, 1, 0);
    loop_on_actions(f, m, 2, 2);
    return f;
}

ConstraintFSA action_count_at_most(const PlanningModel &m, const string &action, size_t k) {
    require_action(m, action);
    ConstraintFSA f{numbered_states(k + 1), 0, {}, {}};
    for (size_t i = 0; i <= k; ++i) {
        f.accepting.push_back(i);
        loop_on_actions(f, m, i, i, action);
        if (i < k)
            f.transitions.push_back({i, TransitionLabel::on_action(action), i + 1});
    }
    return f;
}

ConstraintFSA fsa_product(const ConstraintFSA &a, const ConstraintFSA &b) {
    a.check();
    b.check();
    ConstraintFSA result;
    map<pair<size_t, size_t>, size_t> index;
    deque<pair<size_t, size_t>> open;
    auto state = [&](size_t i, size_t j) {
        auto [it, added] = index.emplace(make_pair(i, j), index.size());
        if (added) {
            result.states.push_back("q" + std::to_string(it->second));
            if (a.is_accepting(i) && b.is_accepting(j))
                result.accepting.push_back(it->second);
            open.push_back({i, j});
        }
        return it->second;
    };
    result.initial = state(a.initial, b.initial);
    while (!open.empty()) {
        auto [i, j] = open.front();
        open.pop_front();
        size_t from = index.at({i, j});
        for (const FsaTransition &ta : a.transitions) {
            if (ta.from != i)
                continue;
            if (!ta.label.is_action()) {
                result.transitions.push_back({from, ta.label, state(ta.to, j)});
                continue;
            }
            for (const FsaTransition &tb : b.transitions)
                if (tb.from == j && tb.label.is_action() && tb.label.action == ta.label.action)
                    result.transitions.push_back({from, ta.label, state(ta.to, tb.to)});
        }
        for (const FsaTransition &tb : b.transitions)
            if (tb.from == j && !tb.label.is_action())
                result.transitions.push_back({from, tb.label, state(i, tb.to)});
    }
    sort(result.accepting.begin(), result.accepting.end());
    return result;
}

static TransitionLabel parse_guard(const string &text, const PlanningModel &m) {
    SExpr e = parse_single_sexpr(text);
    bool negated = false;
    if (e.is_form("not") && e.items.size() == 2) {
        negated = true;
        e = e.items[1];
    }
    return TransitionLabel::on_guard(normalize_dnf(parse_formula(e, m.table())), negated);
}

static DnfFormula formula_arg(const json &item, const char *key, const PlanningModel &m) {
    if (!item.contains(key) || !item[key].is_string())
        throw InputError(string("advice item needs a string \"") + key + "\"");
    return normalize_dnf(parse_formula(item[key].get<string>(), m.table()));
}

static string action_arg(const json &item) {
    if (!item.contains("action") || !item["action"].is_string())
        throw InputError("advice item needs a string \"action\"");
    return item["action"].get<string>();
}

static size_t state_ref(const json &ref, const vector<string> &states) {
    if (ref.is_number_unsigned())
        return ref.get<size_t>();
    if (ref.is_string()) {
        auto it = find(states.begin(), states.end(), ref.get<string>());
        if (it == states.end())
            throw InputError("automaton refers to unknown state " + ref.get<string>());
        return it - states.begin();
    }
    throw InputError("automaton state references must be names or indices");
}

static ConstraintFSA parse_explicit(const json &spec, const PlanningModel &m) {
    ConstraintFSA f;
    if (!spec.is_object() || !spec.contains("states"))
        throw InputError("automaton needs \"states\"");
    const json &states = spec["states"];
    if (states.is_number_unsigned())
        f.states = numbered_states(states.get<size_t>());
    else if (states.is_array())
        for (const json &s : states)
            f.states.push_back(s.get<string>());
    else
        throw InputError("automaton \"states\" must be a count or a list of names");
    f.initial = spec.contains("initial") ? state_ref(spec["initial"], f.states) : 0;
    for (const json &s : spec.value("accepting", json::array()))
        f.accepting.push_back(state_ref(s, f.states));
    sort(f.accepting.begin(), f.accepting.end());
    f.accepting.erase(unique(f.accepting.begin(), f.accepting.end()), f.accepting.end());
    for (const json &t : spec.value("transitions", json::array())) {
        if (!t.contains("from") || !t.contains("to") || !t.contains("label"))
            throw InputError("automaton transitions need \"from\", \"to\" and \"label\"");
        size_t from = state_ref(t["from"], f.states);
        size_t to = state_ref(t["to"], f.states);
        const json &label = t["label"];
        if (label.contains("action")) {
            string name = label["action"].get<string>();
            if (name == "*") {
                loop_on_actions(f, m, from, to);
            } else {
                require_action(m, name);
                f.transitions.push_back({from, TransitionLabel::on_action(name), to});
            }
        } else if (label.contains("formula")) {
            TransitionLabel g = parse_guard(label["formula"].get<string>(), m);
            if (label.value("negated", false))
                g.negated = !g.negated;
            f.transitions.push_back({from, move(g), to});
        } else {
            throw InputError("automaton label needs \"action\" or \"formula\"");
        }
    }
    f.check();
    return f;
}

static ConstraintFSA parse_item(const json &item, const PlanningModel &m) {
    if (!item.is_object())
        throw InputError("advice items must be objects");
    if (item.contains("fsa"))
        return parse_explicit(item["fsa"], m);
    string type;
    if (item.contains("template"))
        type = item["template"].get<string>();
    else if (item.contains("type"))
        type = item["type"].get<string>();
    else
        throw InputError("advice item needs \"template\", \"type\" or \"fsa\"");
    if (type == "never-use-action")
        return never_use_action(m, action_arg(item));
    if (type == "use-action-eventually")
        return use_action_eventually(m, action_arg(item));
    if (type == "eventually-holds")
        return eventually_holds(m, formula_arg(item, "formula", m));
    if (type == "never-holds")
        return never_holds(m, formula_arg(item, "formula", m));
    if (type == "before")
        return before(m, formula_arg(item, "p", m), formula_arg(item, "q", m));
    if (type == "action-count-at-most") {
        if (!item.contains("k") || !item["k"].is_number_unsigned())
            throw InputError("action-count-at-most needs a nonnegative integer \"k\"");
        return action_count_at_most(m, action_arg(item), item["k"].get<size_t>());
    }
    throw InputError("unknown advice template " + type);
}

ParsedAdvice parse_advice(string_view text, const PlanningModel &m) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error &e) {
        throw InputError(string("advice file is not valid JSON: ") + e.what());
    }
    if (doc.is_object() && doc.contains("advice"))
        doc = doc["advice"];
    if (!doc.is_array())
        throw InputError("advice must be a list of items");
    ParsedAdvice result{universal_fsa(m), {}};
    bool first = true;
    try {
        for (const json &item : doc) {
            ConstraintFSA f = parse_item(item, m);
            if (!f.can_accept())
                result.warnings.push_back("advice item " + item.dump() +
                                          " can never reach an accepting state");
            result.fsa = first ? move(f) : fsa_product(result.fsa, f);
            first = false;
        }
    } catch (const json::exception &e) {
        throw InputError(string("malformed advice item: ") + e.what());
    }
    return result;
}

// Projected-out fluents make the guard's own literals trivially true. Under
// negation a literal "not p" over an inactive p is the trivial one, so
// conjuncts mentioning p drop out before the formula is negated.
DnfFormula effective_guard(const TransitionLabel &label, const FluentSet &active) {
    if (!label.negated)
        return restrict_to(label.guard, active);
    vector<vector<FluentId>> kept;
    for (const auto &c : label.guard.disjuncts())
        if (all_of(c.begin(), c.end(), [&](FluentId p) {return active.contains(p);}))
            kept.push_back(c);
    return DnfFormula(move(kept));
}

bool guard_holds(const TransitionLabel &label, const State &s, const FluentSet &active) {
    bool value = holds(s, effective_guard(label, active));
    return label.negated ? !value : value;
}

bool accepts(const ConstraintFSA &f, const Plan &plan, const PlanningModel &m) {
    f.check();
    auto closure = [&](set<size_t> current, const State &s) {
        vector<size_t> stack(current.begin(), current.end());
        while (!stack.empty()) {
            size_t q = stack.back();
            stack.pop_back();
            for (const FsaTransition &t : f.transitions)
                if (t.from == q && !t.label.is_action() && guard_holds(t.label, s, m.fluents()) &&
                    current.insert(t.to).second)
                    stack.push_back(t.to);
        }
        return current;
    };
    State s = m.init();
    set<size_t> current = closure({f.initial}, s);
    for (const string &name : plan.actions) {
        const Action &a = m.action(name);
        if (!applicable(s, a))
            throw PreconditionError("plan is not executable: " + name + " is inapplicable");
        s = apply_effects(s, a);
        set<size_t> next;
        for (size_t q : current)
            for (const FsaTransition &t : f.transitions)
                if (t.from == q && t.label.is_action() && t.label.action == name)
                    next.insert(t.to);
        current = closure(move(next), s);
    }
    return any_of(current.begin(), current.end(), [&](size_t q) {return f.is_accepting(q);});
}

namespace {
string complement_name(const Fluent &f) {
    return f.is_complement() ? f.base_predicate() : "not-" + f.name;
}
}

ConstrainedModel compose(const PlanningModel &m, const ConstraintFSA &f) {
    f.check();
    for (const FsaTransition &t : f.transitions)
        if (t.label.is_action())
            require_action(m, t.label.action);

    auto table = make_shared<FluentTable>(m.table());
    vector<FluentId> in_state;
    set<string> used;
    for (const string &name : f.states) {
        string fluent = "in-state-" + pddl_name(name);
        if (!used.insert(fluent).second || table->find(fluent, {}))
            throw InputError("automaton state name " + name + " clashes with another fluent");
        in_state.push_back(table->intern(fluent));
    }
    if (table->find("goal-accept", {}))
        throw InputError("the model already has a fluent named goal-accept");
    FluentId goal_accept = table->intern("goal-accept");

    // Negated guards read complement fluents; reuse maintained ones, create the rest.
    map<FluentId, FluentId> complement;
    vector<pair<FluentId, FluentId>> created;
    for (const FsaTransition &t : f.transitions) {
        if (t.label.is_action() || !t.label.negated)
            continue;
        for (FluentId p : effective_guard(t.label, m.fluents()).fluents()) {
            if (complement.count(p))
                continue;
            const Fluent &fl = (*table)[p];
            string name = complement_name(fl);
            vector<string> args = fl.args;
            auto existing = table->find(name, args);
            if (existing && m.fluents().contains(*existing)) {
                complement[p] = *existing;
            } else {
                FluentId q = table->intern(name + (existing ? "-guard" : ""), args);
                complement[p] = q;
                created.push_back({p, q});
            }
        }
    }

    size_t universe = table->size();
    FluentSet fluents = m.fluents().resized(universe);
    State init = m.init().resized(universe);
    for (FluentId q : in_state)
        fluents.insert(q);
    fluents.insert(goal_accept);
    init.insert(in_state[f.initial]);
    for (auto [p, q] : created) {
        fluents.insert(q);
        if (!m.init().contains(p))
            init.insert(q);
    }

    vector<Action> base_actions = m.actions();
    for (Action &a : base_actions)
        for (ConditionalEffect &e : a.effects)
            for (auto [p, q] : created) {
                if (binary_search(e.adds.begin(), e.adds.end(), p))
                    e.dels.push_back(q);
                if (binary_search(e.dels.begin(), e.dels.end(), p))
                    e.adds.push_back(q);
            }

    vector<Action> actions;
    map<string, MetaAction> meta;
    auto state_tag = [](size_t q) {return "q" + std::to_string(q);};
    for (const FsaTransition &t : f.transitions) {
        if (!t.label.is_action())
            continue;
        string name = t.label.action + "__" + state_tag(t.from) + "_" + state_tag(t.to);
        if (meta.count(name))
            continue;
        Action copy = base_actions[*m.find_action(t.label.action)];
        copy.name = name;
        copy.prec.push_back(in_state[t.from]);
        if (t.from != t.to)
            copy.effects.push_back({{}, {in_state[t.to]}, {in_state[t.from], goal_accept}});
        else
            copy.effects.push_back({{}, {}, {goal_accept}});
        meta[name] = {MetaAction::Kind::base, t.label.action, t.from, t.to};
        actions.push_back(move(copy));
    }

    map<pair<size_t, size_t>, size_t> guard_count;
    for (const FsaTransition &t : f.transitions) {
        if (t.label.is_action())
            continue;
        DnfFormula phi = effective_guard(t.label, m.fluents());
        if (t.label.negated) {
            DnfFormula negation = DnfFormula::verum();
            for (const auto &c : phi.disjuncts()) {
                vector<vector<FluentId>> options;
                for (FluentId p : c)
                    options.push_back({complement.at(p)});
                negation = dnf_and(negation, DnfFormula(move(options)));
            }
            phi = negation;
        }
        for (const auto &c : phi.disjuncts()) {
            size_t k = guard_count[{t.from, t.to}]++;
            string name = "guard__" + state_tag(t.from) + "_" + state_tag(t.to) + "__" +
                          std::to_string(k);
            Action g{name, c, {}};
            g.prec.push_back(in_state[t.from]);
            if (t.from != t.to)
                g.effects.push_back({{}, {in_state[t.to]}, {in_state[t.from], goal_accept}});
            else
                g.effects.push_back({{}, {}, {goal_accept}});
            meta[name] = {MetaAction::Kind::guard, "", t.from, t.to};
            actions.push_back(move(g));
        }
    }

    for (size_t q : f.accepting) {
        string name = "accept__" + state_tag(q);
        actions.push_back({name, {in_state[q]}, {{{}, {goal_accept}, {}}}});
        meta[name] = {MetaAction::Kind::accept, "", q, q};
    }

    vector<FluentId> goal = m.goal();
    goal.push_back(goal_accept);
    PlanningModel compiled(table, move(fluents), move(actions), move(init), move(goal));
    return {m, f, move(compiled), move(meta), move(in_state), goal_accept};
}

Plan strip_meta(const ConstrainedModel &cm, const Plan &plan) {
    ValidationTrace trace = validate_plan(cm.compiled, plan);
    if (!trace.valid())
        throw InputError("plan is not valid in the constrained model");
    Plan stripped;
    for (const string &name : plan.actions) {
        const MetaAction &meta = cm.meta_action_map.at(name);
        if (meta.kind == MetaAction::Kind::base)
            stripped.actions.push_back(meta.base_action);
    }
    return stripped;
}
}
