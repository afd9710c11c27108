#include "plexplain/search.h"

#include "plexplain/errors.h"

#include <algorithm>
#include <limits>
#include <queue>
#include <unordered_map>

using namespace std;

namespace plexplain {
string to_string(SearchResult::Outcome outcome) {
    switch (outcome) {
    case SearchResult::Outcome::solvable: return "solvable";
    case SearchResult::Outcome::unsolvable: return "unsolvable";
    case SearchResult::Outcome::resource_exhausted: return "resource-exhausted";
    }
    return "?";
}

AdditiveHeuristic::AdditiveHeuristic(const PlanningModel &m)
    : goal(m.goal()), num_fluents(m.table().size()) {
    ops_by_pre.resize(num_fluents);
    for (const Action &a : m.actions()) {
        for (const ConditionalEffect &e : a.effects) {
            if (e.adds.empty())
                continue;
            UnaryOperator op;
            op.pre = a.prec;
            op.pre.insert(op.pre.end(), e.condition.begin(), e.condition.end());
            op.pre = sorted_unique(move(op.pre));
            op.eff = e.adds;
            size_t index = ops.size();
            for (FluentId p : op.pre)
                ops_by_pre[p].push_back(index);
            ops.push_back(move(op));
        }
    }
}

optional<int64_t> AdditiveHeuristic::evaluate(const State &s) const {
    constexpr int64_t inf = numeric_limits<int64_t>::max() / 4;
    vector<int64_t> cost(num_fluents, inf);
    vector<int64_t> op_cost(ops.size(), 1);
    vector<size_t> unsatisfied(ops.size());
    using Entry = pair<int64_t, FluentId>;
    priority_queue<Entry, vector<Entry>, greater<Entry>> queue;
    auto reach = [&](FluentId p, int64_t c) {
        if (c < cost[p]) {
            cost[p] = c;
            queue.push({c, p});
        }
    };
    for (FluentId p : s.to_vector())
        reach(p, 0);
    for (size_t i = 0; i < ops.size(); ++i) {
        unsatisfied[i] = ops[i].pre.size();
        if (unsatisfied[i] == 0)
            for (FluentId q : ops[i].eff)
                reach(q, 1);
    }
    while (!queue.empty()) {
        auto [c, p] = queue.top();
        queue.pop();
        if (c > cost[p])
            continue;
        for (size_t i : ops_by_pre[p]) {
            op_cost[i] = min(inf, op_cost[i] + c);
            if (--unsatisfied[i] == 0)
                for (FluentId q : ops[i].eff)
                    reach(q, op_cost[i]);
        }
    }
    int64_t total = 0;
    for (FluentId g : goal) {
        if (cost[g] >= inf)
            return nullopt;
        total = min(inf, total + cost[g]);
    }
    return total;
}

SearchResult decide_solvable(const PlanningModel &m, const SearchLimits &limits) {
    SearchResult result;
    auto start = chrono::steady_clock::now();
    const auto &actions = m.actions();

    struct Node {
        State state;
        int64_t parent;
        size_t action;
    };
    vector<Node> nodes;
    unordered_map<State, size_t, FluentSetHash> seen;
    AdditiveHeuristic heuristic(m);
    constexpr int64_t dead_end = numeric_limits<int64_t>::max();

    // (h, insertion order) lexicographic; insertion order equals node index.
    using Entry = pair<int64_t, size_t>;
    priority_queue<Entry, vector<Entry>, greater<Entry>> open;

    auto extract_plan = [&](size_t index) {
        vector<string> names;
        for (int64_t i = static_cast<int64_t>(index); nodes[i].parent >= 0; i = nodes[i].parent)
            names.push_back(actions[nodes[i].action].name);
        reverse(names.begin(), names.end());
        return Plan{names};
    };

    nodes.push_back({m.init(), -1, 0});
    seen.emplace(m.init(), 0);
    if (m.is_goal(m.init())) {
        result.outcome = SearchResult::Outcome::solvable;
        return result;
    }
    open.push({heuristic.evaluate(m.init()).value_or(dead_end), 0});

    while (!open.empty()) {
        size_t index = open.top().second;
        open.pop();
        if (result.expansions >= limits.max_expansions) {
            result.outcome = SearchResult::Outcome::resource_exhausted;
            result.limit = "expansion budget of " + std::to_string(limits.max_expansions);
            return result;
        }
        if ((result.expansions & 255) == 0 &&
            chrono::steady_clock::now() - start > limits.max_time) {
            result.outcome = SearchResult::Outcome::resource_exhausted;
            result.limit = "time budget of " + std::to_string(limits.max_time.count()) + " s";
            return result;
        }
        ++result.expansions;
        const State current = nodes[index].state;
        for (size_t a = 0; a < actions.size(); ++a) {
            if (!applicable(current, actions[a]))
                continue;
            State next = apply_effects(current, actions[a]);
            if (seen.count(next))
                continue;
            size_t child = nodes.size();
            seen.emplace(next, child);
            nodes.push_back({move(next), static_cast<int64_t>(index), a});
            if (m.is_goal(nodes[child].state)) {
                result.outcome = SearchResult::Outcome::solvable;
                result.plan = extract_plan(child);
                return result;
            }
            open.push({heuristic.evaluate(nodes[child].state).value_or(dead_end), child});
        }
    }
    result.outcome = SearchResult::Outcome::unsolvable;
    return result;
}

set<Plan> enumerate_plans(const PlanningModel &m, size_t max_len, uint64_t budget) {
    set<Plan> plans;
    vector<string> prefix;
    uint64_t generated = 0;
    const auto &actions = m.actions();
    auto visit = [&](auto &&self, const State &s) -> void {
        if (m.is_goal(s))
            plans.insert(Plan{prefix});
        if (prefix.size() == max_len)
            return;
        for (const Action &a : actions) {
            if (!applicable(s, a))
                continue;
            if (++generated > budget)
                throw ResourceExhausted("plan enumeration budget of " +
                                        std::to_string(budget) + " nodes exceeded");
            prefix.push_back(a.name);
            self(self, apply_effects(s, a));
            prefix.pop_back();
        }
    };
    visit(visit, m.init());
    return plans;
}
}
