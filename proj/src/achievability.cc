#include "plexplain/achievability.h"

#include "plexplain/errors.h"

#include <algorithm>
#include <set>

using namespace std;

namespace plexplain {
static set<size_t> ancestors_of(const LandmarkGraph &lg, size_t target) {
    set<size_t> result{target};
    vector<size_t> stack{target};
    while (!stack.empty()) {
        size_t x = stack.back();
        stack.pop_back();
        for (const Ordering &o : lg.orderings)
            if (o.to == x && result.insert(o.from).second)
                stack.push_back(o.from);
    }
    return result;
}

static vector<FluentId> subtract(const vector<FluentId> &a, const vector<FluentId> &b) {
    vector<FluentId> result;
    set_difference(a.begin(), a.end(), b.begin(), b.end(), back_inserter(result));
    return result;
}

static bool intersects(const vector<FluentId> &a, const vector<FluentId> &b) {
    return any_of(a.begin(), a.end(),
                  [&](FluentId p) {return binary_search(b.begin(), b.end(), p);});
}

namespace {
struct Orderings {
    DnfFormula nec = DnfFormula::verum();
    DnfFormula gnec = DnfFormula::verum();
    vector<FluentId> nat;
};

// Conditional effects recording that action `a` achieves landmark `phi`.
vector<ConditionalEffect> achieving_effects(const Action &a, const DnfFormula &phi,
                                            const Orderings &ord, FluentId achieved,
                                            FluentId unset, FluentId first_time) {
    vector<FluentId> base_adds, base_dels;
    for (const ConditionalEffect &e : a.effects)
        if (e.condition.empty()) {
            base_adds.insert(base_adds.end(), e.adds.begin(), e.adds.end());
            base_dels.insert(base_dels.end(), e.dels.begin(), e.dels.end());
        }
    base_adds = sorted_unique(move(base_adds));
    base_dels = sorted_unique(move(base_dels));

    vector<ConditionalEffect> result;
    for (const auto &c : phi.disjuncts()) {
        for (const ConditionalEffect &e : a.effects) {
            if (!intersects(c, e.adds))
                continue;
            vector<FluentId> adds = base_adds;
            adds.insert(adds.end(), e.adds.begin(), e.adds.end());
            adds = sorted_unique(move(adds));
            vector<FluentId> rest = subtract(c, adds);
            vector<FluentId> dels = base_dels;
            dels.insert(dels.end(), e.dels.begin(), e.dels.end());
            dels = sorted_unique(move(dels));
            if (intersects(rest, dels))
                continue;
            vector<FluentId> base = e.condition;
            base.insert(base.end(), rest.begin(), rest.end());
            base.insert(base.end(), ord.nat.begin(), ord.nat.end());
            DnfFormula cond1 = dnf_and(DnfFormula::conjunction(move(base)), ord.nec);
            DnfFormula cond2 = dnf_and(cond1, dnf_and(ord.gnec, DnfFormula::atom(unset)));
            for (const auto &k : cond1.disjuncts())
                result.push_back({k, {achieved}, {}});
            for (const auto &k : cond2.disjuncts())
                result.push_back({k, {achieved, first_time}, {unset}});
        }
    }
    return result;
}
}

AchievabilityModel compile_achievability(const PlanningModel &m, const LandmarkGraph &lg,
                                         size_t target, const AchievabilityOptions &options) {
    if (target >= lg.landmarks.size())
        throw PreconditionError("landmark " + std::to_string(target) + " is not in the graph");
    set<size_t> relevant = ancestors_of(lg, target);

    auto table = make_shared<FluentTable>(m.table());
    size_t n = lg.landmarks.size();
    vector<optional<FluentId>> achieved(n), unset(n), first_time(n);
    for (size_t id : relevant) {
        string tag = "lm" + std::to_string(id);
        achieved[id] = table->intern("achieved", {tag});
        unset[id] = table->intern("unset", {tag});
        first_time[id] = table->intern("first-time-achieved", {tag});
    }
    size_t universe = table->size();
    FluentSet fluents = m.fluents().resized(universe);
    State init = m.init().resized(universe);
    for (size_t id : relevant) {
        fluents.insert(*achieved[id]);
        fluents.insert(*unset[id]);
        fluents.insert(*first_time[id]);
        if (holds(m.init(), lg.landmarks[id].formula)) {
            init.insert(*achieved[id]);
            init.insert(*first_time[id]);
        } else {
            init.insert(*unset[id]);
        }
    }

    AchievabilityModel result{PlanningModel(table, fluents, {}, init, {}), achieved, unset,
                              first_time, {}, {}};
    vector<Orderings> enforced(n), relaxed(n);
    for (size_t id : relevant) {
        Orderings &ord = enforced[id];
        for (size_t p : lg.predecessors(id, Ordering::Kind::nec))
            ord.nec = dnf_and(ord.nec, lg.landmarks[p].formula);
        for (size_t p : lg.predecessors(id, Ordering::Kind::gnec))
            ord.gnec = dnf_and(ord.gnec, lg.landmarks[p].formula);
        for (size_t p : lg.predecessors(id, Ordering::Kind::nat))
            ord.nat.push_back(*achieved[p]);
    }

    set<size_t> dropped;
    vector<Action> actions;
    actions.reserve(m.actions().size());
    for (const Action &a : m.actions()) {
        Action b = a;
        for (size_t id : relevant) {
            const DnfFormula &phi = lg.landmarks[id].formula;
            auto effects = achieving_effects(a, phi, enforced[id], *achieved[id], *unset[id],
                                             *first_time[id]);
            if (effects.size() > options.max_expanded_effects) {
                if (dropped.insert(id).second)
                    result.warnings.push_back(
                        "orderings into landmark " + std::to_string(id) +
                        " not enforced: more than " +
                        std::to_string(options.max_expanded_effects) +
                        " expanded conditional effects for action " + a.name);
                effects = achieving_effects(a, phi, relaxed[id], *achieved[id], *unset[id],
                                            *first_time[id]);
            }
            b.effects.insert(b.effects.end(), effects.begin(), effects.end());
        }
        for (size_t id : relevant)
            b.effects.push_back({{*first_time[id]}, {}, {*first_time[id]}});
        actions.push_back(move(b));
    }
    result.unenforced.assign(dropped.begin(), dropped.end());
    result.model = PlanningModel(table, move(fluents), move(actions), move(init),
                                 {*first_time[target]});
    return result;
}

LandmarkGraph with_goal_landmark(const LandmarkGraph &lg, const PlanningModel &m,
                                 size_t &goal_id) {
    LandmarkGraph g = lg;
    DnfFormula phi = DnfFormula::conjunction(m.goal());
    goal_id = g.add_landmark(phi, false, holds(m.init(), phi));
    // Only landmarks ordered before some goal conjunct are strictly earlier
    // than the goal; a goal conjunct itself may become true in the last step.
    vector<bool> earlier(goal_id, false);
    vector<size_t> stack;
    for (size_t id = 0; id < goal_id; ++id)
        if (g.landmarks[id].is_goal_conjunct)
            stack.push_back(id);
    while (!stack.empty()) {
        size_t x = stack.back();
        stack.pop_back();
        for (const Ordering &o : lg.orderings)
            if (o.to == x && !earlier[o.from]) {
                earlier[o.from] = true;
                stack.push_back(o.from);
            }
    }
    for (size_t id = 0; id < goal_id; ++id)
        if (earlier[id])
            g.orderings.push_back({id, goal_id, Ordering::Kind::nat});
    return g;
}

static bool achievable(const PlanningModel &m, const LandmarkGraph &lg, size_t id,
                       const SearchLimits &limits, const AchievabilityOptions &options,
                       vector<string> &warnings) {
    AchievabilityModel am = compile_achievability(m, lg, id, options);
    warnings.insert(warnings.end(), am.warnings.begin(), am.warnings.end());
    SearchResult r = decide_solvable(am.model, limits);
    if (r.exhausted())
        throw ResourceExhausted("achievability check of landmark " + std::to_string(id) +
                                " hit the " + r.limit);
    return r.solvable();
}

FailedSubgoal first_unachievable(const PlanningModel &m, const LandmarkGraph &lg,
                                 const vector<size_t> &seq, const SearchLimits &limits,
                                 const AchievabilityOptions &options) {
    FailedSubgoal result;
    for (size_t id : seq) {
        if (!achievable(m, lg, id, limits, options, result.warnings)) {
            result.landmark = id;
            result.formula = lg.landmark(id).formula;
            return result;
        }
        result.achieved_prefix.push_back(id);
    }
    size_t goal_id;
    LandmarkGraph extended = with_goal_landmark(lg, m, goal_id);
    if (achievable(m, extended, goal_id, limits, options, result.warnings))
        result.warnings.push_back("the goal conjunction is achievable under all orderings; "
                                  "the model is not unsolvable");
    result.formula = extended.landmarks[goal_id].formula;
    return result;
}
}
