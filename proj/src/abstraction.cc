#include "plexplain/abstraction.h"

#include "plexplain/errors.h"

#include <algorithm>
#include <bit>
#include <queue>
#include <set>

using namespace std;

namespace plexplain {
static vector<FluentId> without(const vector<FluentId> &ids, const FluentSet &removed) {
    vector<FluentId> kept;
    for (FluentId id : ids)
        if (!removed.contains(id))
            kept.push_back(id);
    return kept;
}

PlanningModel project_model(const PlanningModel &m, const FluentSet &projected) {
    FluentSet removed = projected.resized(m.table().size());
    FluentSet fluents = m.fluents();
    fluents -= removed;
    State init = m.init();
    init -= removed;
    vector<Action> actions;
    actions.reserve(m.actions().size());
    for (const Action &a : m.actions()) {
        Action b;
        b.name = a.name;
        b.prec = without(a.prec, removed);
        for (const ConditionalEffect &e : a.effects)
            b.effects.push_back({without(e.condition, removed), without(e.adds, removed),
                                 without(e.dels, removed)});
        actions.push_back(move(b));
    }
    return PlanningModel(m.table_ptr(), move(fluents), move(actions), move(init),
                         without(m.goal(), removed));
}

AbstractionLattice::AbstractionLattice(PlanningModel root, vector<FluentGroup> groups,
                                       vector<vector<string>> forbidden, SearchLimits limits)
    : root_(move(root)), groups_(move(groups)), limits_(limits) {
    if (groups_.size() > 62)
        throw InputError("at most 62 fluent groups are supported");
    sort(groups_.begin(), groups_.end(),
         [](const FluentGroup &a, const FluentGroup &b) {return a.name < b.name;});
    FluentSet seen(root_.table().size());
    for (size_t i = 0; i < groups_.size(); ++i) {
        FluentGroup &g = groups_[i];
        if (i > 0 && groups_[i - 1].name == g.name)
            throw InputError("duplicate group name " + g.name);
        g.members = sorted_unique(move(g.members));
        if (g.members.empty())
            throw InputError("group " + g.name + " has no fluents in the model");
        for (FluentId id : g.members) {
            if (!root_.fluents().contains(id))
                throw InputError("group " + g.name + " mentions a fluent outside the model");
            if (seen.contains(id))
                throw InputError("groups overlap on fluent " + root_.name(id) +
                                 " (group " + g.name + ")");
            seen.insert(id);
        }
    }
    for (const auto &combination : forbidden)
        forbidden_.push_back(mask_of(combination));
}

GroupMask AbstractionLattice::full_mask() const {
    return groups_.empty() ? 0 : (GroupMask(1) << groups_.size()) - 1;
}

GroupMask AbstractionLattice::mask_of(const vector<string> &group_names) const {
    GroupMask mask = 0;
    for (const string &name : group_names) {
        auto it = find_if(groups_.begin(), groups_.end(),
                          [&](const FluentGroup &g) {return g.name == name;});
        if (it == groups_.end())
            throw InputError("unknown group " + name);
        mask |= GroupMask(1) << (it - groups_.begin());
    }
    return mask;
}

vector<string> AbstractionLattice::names_of(GroupMask mask) const {
    vector<string> names;
    for (size_t i = 0; i < groups_.size(); ++i)
        if (mask >> i & 1)
            names.push_back(groups_[i].name);
    return names;
}

FluentSet AbstractionLattice::members_of(GroupMask mask) const {
    FluentSet members(root_.table().size());
    for (size_t i = 0; i < groups_.size(); ++i)
        if (mask >> i & 1)
            for (FluentId id : groups_[i].members)
                members.insert(id);
    return members;
}

bool AbstractionLattice::admissible(GroupMask mask) const {
    for (GroupMask f : forbidden_)
        if ((mask & f) == f)
            return false;
    return true;
}

size_t AbstractionLattice::num_admissible_nodes() const {
    if (forbidden_.empty())
        return size_t(1) << groups_.size();
    size_t count = 0;
    for (GroupMask mask = 0; mask <= full_mask(); ++mask)
        count += admissible(mask);
    return count;
}

const LatticeNode &AbstractionLattice::node(GroupMask mask) const {
    if (mask & ~full_mask())
        throw InputError("lattice node refers to unknown groups");
    lock_guard<std::mutex> lock(mutex);
    auto it = nodes.find(mask);
    if (it != nodes.end())
        return *it->second;
    auto created = make_unique<LatticeNode>(mask, names_of(mask),
                                            project_model(root_, members_of(mask)));
    return *nodes.emplace(mask, move(created)).first->second;
}

const LatticeNode &AbstractionLattice::top() const {
    return node(full_mask());
}

const SearchResult &AbstractionLattice::solve(const LatticeNode &n) const {
    call_once(n.decided, [&] {
        SearchResult result = decide_solvable(n.model_, limits_);
        if (result.exhausted())
            throw ResourceExhausted("solvability check of node {" +
                                    [&] {
                                        string s;
                                        for (const string &p : n.projected_)
                                            s += (s.empty() ? "" : ",") + p;
                                        return s;
                                    }() + "} hit the " + result.limit);
        n.result_ = move(result);
    });
    return n.result_;
}

static bool names_less(const vector<string> &a, const vector<string> &b) {
    return a < b;
}

vector<const LatticeNode *> AbstractionLattice::maximal_nodes() const {
    vector<const LatticeNode *> result;
    if (forbidden_.empty()) {
        result.push_back(&top());
        return result;
    }
    if (groups_.size() > 20)
        throw InputError("forbidden combinations need an explicit scan; at most 20 groups");
    for (GroupMask mask = 0; mask <= full_mask(); ++mask) {
        if (!admissible(mask))
            continue;
        bool maximal = true;
        for (size_t i = 0; i < groups_.size() && maximal; ++i)
            if (!(mask >> i & 1) && admissible(mask | GroupMask(1) << i))
                maximal = false;
        if (maximal)
            result.push_back(&node(mask));
    }
    sort(result.begin(), result.end(), [](const LatticeNode *a, const LatticeNode *b) {
        return names_less(a->projected(), b->projected());
    });
    return result;
}

AbstractionLattice build_lattice(const PlanningModel &m, vector<FluentGroup> groups,
                                 SearchLimits limits) {
    return AbstractionLattice(m, move(groups), {}, limits);
}

const LatticeNode &concretize(const AbstractionLattice &lat, const LatticeNode &node,
                              const vector<string> &restored) {
    GroupMask mask = lat.mask_of(restored);
    if ((mask & node.mask()) != mask)
        throw PreconditionError("cannot concretize groups that are not projected at this node");
    return lat.node(node.mask() & ~mask);
}

vector<const LatticeNode *> minimum_abstraction_set(const AbstractionLattice &lat) {
    vector<const LatticeNode *> result;
    for (const LatticeNode *n : lat.maximal_nodes())
        if (lat.solvable(*n))
            result.push_back(n);
    return result;
}

string to_string(ModelUpdate::Kind kind) {
    switch (kind) {
    case ModelUpdate::Kind::init: return "init-literal";
    case ModelUpdate::Kind::goal: return "goal-literal";
    case ModelUpdate::Kind::precondition: return "precondition-literal";
    case ModelUpdate::Kind::condition: return "condition-literal";
    case ModelUpdate::Kind::add_effect: return "add-effect-literal";
    case ModelUpdate::Kind::del_effect: return "del-effect-literal";
    }
    return "?";
}

optional<ModelUpdate::Kind> parse_update_kind(const string &text) {
    for (auto kind : {ModelUpdate::Kind::init, ModelUpdate::Kind::goal,
                      ModelUpdate::Kind::precondition, ModelUpdate::Kind::condition,
                      ModelUpdate::Kind::add_effect, ModelUpdate::Kind::del_effect})
        if (to_string(kind) == text)
            return kind;
    return nullopt;
}

vector<ModelUpdate> diff_models(const PlanningModel &abs, const PlanningModel &conc) {
    if (abs.table_ptr() != conc.table_ptr() || !abs.fluents().is_subset_of(conc.fluents()))
        throw InputError("models are not in a projection relation");
    FluentSet restored = conc.fluents();
    restored -= abs.fluents();
    if (!(project_model(conc, restored) == abs))
        throw InputError("models are not in a projection relation");

    vector<ModelUpdate> updates;
    auto note = [&](ModelUpdate::Kind kind, const optional<string> &action,
                    const vector<FluentId> &ids) {
        for (FluentId id : ids)
            if (restored.contains(id))
                updates.push_back({kind, action, id});
    };
    note(ModelUpdate::Kind::init, nullopt, conc.init().to_vector());
    note(ModelUpdate::Kind::goal, nullopt, conc.goal());
    for (const Action &a : conc.actions()) {
        note(ModelUpdate::Kind::precondition, a.name, a.prec);
        for (const ConditionalEffect &e : a.effects) {
            note(ModelUpdate::Kind::condition, a.name, e.condition);
            note(ModelUpdate::Kind::add_effect, a.name, e.adds);
            note(ModelUpdate::Kind::del_effect, a.name, e.dels);
        }
    }
    return updates;
}

ExplanatorySet explanation_cost(const AbstractionLattice &lat,
                                const vector<const LatticeNode *> &minimum,
                                GroupMask restored) {
    ExplanatorySet result;
    set<ModelUpdate> seen;
    GroupMask used = 0;
    for (const LatticeNode *m : minimum) {
        GroupMask here = restored & m->mask();
        used |= here;
        const LatticeNode &conc = lat.node(m->mask() & ~here);
        for (ModelUpdate &u : diff_models(m->model(), conc.model()))
            if (seen.insert(u).second)
                result.updates.push_back(move(u));
    }
    result.groups = lat.names_of(used);
    result.cost = result.updates.size();
    return result;
}

ExplanatorySet find_explanatory_fluents(const AbstractionLattice &lat) {
    if (lat.solvable(lat.root()))
        throw NoExplanation(NoExplanation::Reason::solvable_root,
                            "the concrete model is solvable; there is nothing to explain");
    vector<const LatticeNode *> minimum = minimum_abstraction_set(lat);
    if (minimum.empty())
        throw NoExplanation(NoExplanation::Reason::unsolvable_at_top,
                            "unsolvable at every abstraction");

    GroupMask universe = 0;
    for (const LatticeNode *m : minimum)
        universe |= m->mask();
    vector<size_t> group_cost(lat.num_groups(), 0);
    for (size_t g = 0; g < lat.num_groups(); ++g)
        if (universe >> g & 1)
            group_cost[g] = explanation_cost(lat, minimum, GroupMask(1) << g).cost;

    struct Candidate {
        size_t cost;
        bool exact;
        GroupMask mask;
        vector<string> names;
        int last;
    };
    auto worse = [](const Candidate &a, const Candidate &b) {
        if (a.cost != b.cost)
            return a.cost > b.cost;
        if (a.names.size() != b.names.size())
            return a.names.size() > b.names.size();
        if (a.names != b.names)
            return a.names > b.names;
        return !a.exact && b.exact;
    };
    priority_queue<Candidate, vector<Candidate>, decltype(worse)> open(worse);
    auto push_children = [&](const Candidate &parent) {
        for (size_t g = parent.last + 1; g < lat.num_groups(); ++g) {
            if (!(universe >> g & 1))
                continue;
            Candidate child;
            child.mask = parent.mask | GroupMask(1) << g;
            child.cost = parent.cost + group_cost[g];
            child.exact = false;
            child.names = lat.names_of(child.mask);
            child.last = static_cast<int>(g);
            open.push(move(child));
        }
    };
    push_children(Candidate{0, true, 0, {}, -1});
    while (!open.empty()) {
        Candidate current = open.top();
        open.pop();
        ExplanatorySet exact = explanation_cost(lat, minimum, current.mask);
        if (!current.exact && exact.cost != current.cost) {
            Candidate again = current;
            again.cost = exact.cost;
            again.exact = true;
            open.push(move(again));
            continue;
        }
        bool explains = all_of(minimum.begin(), minimum.end(), [&](const LatticeNode *m) {
            return !lat.solvable(lat.node(m->mask() & ~current.mask));
        });
        if (explains)
            return exact;
        if (!current.exact || exact.cost == current.cost)
            push_children(current);
    }
    throw logic_error("explanatory fluent search exhausted without reaching the root");
}
}
