#include "plexplain/landmarks.h"

#include "plexplain/errors.h"
#include "plexplain/search.h"

#include <algorithm>
#include <deque>
#include <map>
#include <queue>
#include <set>

using namespace std;

namespace plexplain {
string to_string(Ordering::Kind kind) {
    switch (kind) {
    case Ordering::Kind::nat: return "nat";
    case Ordering::Kind::nec: return "nec";
    case Ordering::Kind::gnec: return "gnec";
    }
    return "?";
}

const Landmark &LandmarkGraph::landmark(size_t id) const {
    if (id >= landmarks.size())
        throw PreconditionError("unknown landmark id " + std::to_string(id));
    return landmarks[id];
}

vector<size_t> LandmarkGraph::predecessors(size_t to, Ordering::Kind kind) const {
    vector<size_t> result;
    for (const Ordering &o : orderings)
        if (o.to == to && o.kind == kind)
            result.push_back(o.from);
    sort(result.begin(), result.end());
    result.erase(unique(result.begin(), result.end()), result.end());
    return result;
}

bool LandmarkGraph::has_edge(size_t from, size_t to) const {
    return any_of(orderings.begin(), orderings.end(),
                  [&](const Ordering &o) {return o.from == from && o.to == to;});
}

size_t LandmarkGraph::add_landmark(DnfFormula formula, bool goal_conjunct, bool initially_true) {
    size_t id = landmarks.size();
    landmarks.push_back({id, move(formula), goal_conjunct, initially_true});
    return id;
}

LandmarkGraph drop_landmarks(const LandmarkGraph &g, const function<bool(const Landmark &)> &drop) {
    size_t n = g.landmarks.size();
    vector<optional<size_t>> new_id(n);
    LandmarkGraph result;
    for (const Landmark &l : g.landmarks)
        if (!drop(l))
            new_id[l.id] = result.add_landmark(l.formula, l.is_goal_conjunct, l.initially_true);
    vector<vector<size_t>> successors(n);
    for (const Ordering &o : g.orderings) {
        successors[o.from].push_back(o.to);
        if (new_id[o.from] && new_id[o.to])
            result.orderings.push_back({*new_id[o.from], *new_id[o.to], o.kind});
    }
    for (size_t u = 0; u < n; ++u) {
        if (!new_id[u])
            continue;
        // Kept landmarks reachable from u through removed ones only.
        vector<bool> seen(n, false);
        vector<size_t> stack;
        for (size_t v : successors[u])
            if (!new_id[v] && !seen[v]) {
                seen[v] = true;
                stack.push_back(v);
            }
        set<size_t> reached;
        while (!stack.empty()) {
            size_t v = stack.back();
            stack.pop_back();
            for (size_t w : successors[v]) {
                if (new_id[w]) {
                    reached.insert(w);
                } else if (!seen[w]) {
                    seen[w] = true;
                    stack.push_back(w);
                }
            }
        }
        for (size_t w : reached)
            if (w != u && !result.has_edge(*new_id[u], *new_id[w]))
                result.orderings.push_back({*new_id[u], *new_id[w], Ordering::Kind::nat});
    }
    return result;
}

FluentSet relaxed_reachable(const PlanningModel &m,
                            const function<bool(size_t, size_t)> &skip) {
    const auto &actions = m.actions();
    struct Op {
        vector<FluentId> pre;
        const vector<FluentId> *adds;
        size_t missing;
    };
    vector<Op> ops;
    vector<vector<size_t>> by_pre(m.table().size());
    for (size_t a = 0; a < actions.size(); ++a) {
        for (size_t e = 0; e < actions[a].effects.size(); ++e) {
            const ConditionalEffect &eff = actions[a].effects[e];
            if (eff.adds.empty() || (skip && skip(a, e)))
                continue;
            vector<FluentId> pre = actions[a].prec;
            pre.insert(pre.end(), eff.condition.begin(), eff.condition.end());
            pre = sorted_unique(move(pre));
            for (FluentId p : pre)
                by_pre[p].push_back(ops.size());
            size_t missing = pre.size();
            ops.push_back({move(pre), &eff.adds, missing});
        }
    }
    FluentSet reached(m.table().size());
    vector<FluentId> queue;
    auto reach = [&](FluentId p) {
        if (!reached.contains(p)) {
            reached.insert(p);
            queue.push_back(p);
        }
    };
    for (FluentId p : m.init().to_vector())
        reach(p);
    for (const Op &op : ops)
        if (op.missing == 0)
            for (FluentId q : *op.adds)
                reach(q);
    for (size_t i = 0; i < queue.size(); ++i)
        for (size_t o : by_pre[queue[i]])
            if (--ops[o].missing == 0)
                for (FluentId q : *ops[o].adds)
                    reach(q);
    return reached;
}

namespace {
class Extractor {
    const PlanningModel &m;
    const LandmarkOptions &options;
    FluentSet deleted;
    LandmarkGraph graph;
    map<DnfFormula, size_t> index;
    deque<size_t> open;

    bool is_static(FluentId p) const {
        return m.init().contains(p) && !deleted.contains(p);
    }

    FluentSet fact_set(const DnfFormula &phi) const {
        return FluentSet(m.table().size(), phi.fluents());
    }

    bool adds_any(const ConditionalEffect &e, const FluentSet &facts) const {
        return any_of(e.adds.begin(), e.adds.end(), [&](FluentId p) {return facts.contains(p);});
    }

    bool goal_reachable_without(const FluentSet &facts) const {
        FluentSet reached = relaxed_reachable(m, [&](size_t a, size_t e) {
            return adds_any(m.actions()[a].effects[e], facts);
        });
        return reached.contains_all(m.goal());
    }

    bool reaches(size_t from, size_t to) const {
        vector<size_t> stack{from};
        set<size_t> seen{from};
        while (!stack.empty()) {
            size_t x = stack.back();
            stack.pop_back();
            if (x == to)
                return true;
            for (const Ordering &o : graph.orderings)
                if (o.from == x && seen.insert(o.to).second)
                    stack.push_back(o.to);
        }
        return false;
    }

    void add_ordering(size_t from, size_t to, Ordering::Kind kind) {
        if (from == to || reaches(to, from))
            return;
        Ordering o{from, to, kind};
        if (find(graph.orderings.begin(), graph.orderings.end(), o) == graph.orderings.end())
            graph.orderings.push_back(o);
    }

    optional<size_t> intern(const DnfFormula &phi, bool goal_conjunct) {
        auto it = index.find(phi);
        if (it != index.end()) {
            graph.landmarks[it->second].is_goal_conjunct |= goal_conjunct;
            return it->second;
        }
        bool initially = holds(m.init(), phi);
        if (!initially && !goal_conjunct && goal_reachable_without(fact_set(phi)))
            return nullopt;
        size_t id = graph.add_landmark(phi, goal_conjunct, initially);
        index.emplace(phi, id);
        open.push_back(id);
        return id;
    }

    vector<DnfFormula> candidates(const vector<vector<FluentId>> &pres) const {
        vector<DnfFormula> result;
        vector<FluentId> shared = pres.front();
        for (const auto &pre : pres) {
            vector<FluentId> kept;
            set_intersection(shared.begin(), shared.end(), pre.begin(), pre.end(),
                             back_inserter(kept));
            shared = move(kept);
        }
        for (FluentId p : shared)
            if (!is_static(p))
                result.push_back(DnfFormula::atom(p));

        // Same-predicate disjunctions covering every first achiever.
        const FluentTable &table = m.table();
        map<string, set<FluentId>> by_predicate;
        map<string, size_t> coverage;
        for (const auto &pre : pres) {
            set<string> here;
            for (FluentId p : pre) {
                if (binary_search(shared.begin(), shared.end(), p))
                    continue;
                const string &name = table[p].name;
                by_predicate[name].insert(p);
                here.insert(name);
            }
            for (const string &name : here)
                ++coverage[name];
        }
        for (const auto &[name, facts] : by_predicate) {
            if (coverage[name] != pres.size() || facts.size() < 2 ||
                facts.size() > options.max_disjuncts)
                continue;
            if (any_of(facts.begin(), facts.end(), [&](FluentId p) {return is_static(p);}))
                continue;
            vector<vector<FluentId>> disjuncts;
            for (FluentId p : facts)
                disjuncts.push_back({p});
            result.emplace_back(move(disjuncts));
        }
        return result;
    }

    void expand(size_t id) {
        const DnfFormula phi = graph.landmarks[id].formula;
        if (graph.landmarks[id].initially_true)
            return;
        const FluentSet facts = fact_set(phi);
        const auto &actions = m.actions();
        FluentSet before = relaxed_reachable(m, [&](size_t a, size_t e) {
            return adds_any(actions[a].effects[e], facts);
        });
        vector<vector<FluentId>> first_pres;
        set<size_t> achiever_actions;
        vector<vector<FluentId>> all_pres;
        for (size_t a = 0; a < actions.size(); ++a) {
            for (const ConditionalEffect &e : actions[a].effects) {
                if (!adds_any(e, facts))
                    continue;
                vector<FluentId> pre = actions[a].prec;
                pre.insert(pre.end(), e.condition.begin(), e.condition.end());
                pre = sorted_unique(move(pre));
                achiever_actions.insert(a);
                all_pres.push_back(pre);
                if (before.contains_all(pre))
                    first_pres.push_back(move(pre));
            }
        }
        if (first_pres.empty())
            return;
        for (const DnfFormula &candidate : candidates(first_pres)) {
            if (candidate == phi)
                continue;
            optional<size_t> pred = intern(candidate, false);
            if (!pred)
                continue;
            add_ordering(*pred, id, Ordering::Kind::gnec);
            bool every_time = achiever_actions.size() == 1 &&
                all_of(all_pres.begin(), all_pres.end(), [&](const vector<FluentId> &pre) {
                    return holds(FluentSet(m.table().size(), pre), candidate);
                });
            if (every_time)
                add_ordering(*pred, id, Ordering::Kind::nec);
        }
    }

    void add_transitive_orderings() {
        size_t n = graph.landmarks.size();
        vector<vector<bool>> direct(n, vector<bool>(n, false));
        for (const Ordering &o : graph.orderings)
            direct[o.from][o.to] = true;
        for (size_t from = 0; from < n; ++from) {
            // Landmarks reachable over paths of length two or more.
            vector<bool> seen(n, false);
            vector<size_t> stack;
            for (size_t mid = 0; mid < n; ++mid)
                if (direct[from][mid])
                    for (size_t to = 0; to < n; ++to)
                        if (direct[mid][to] && !seen[to]) {
                            seen[to] = true;
                            stack.push_back(to);
                        }
            while (!stack.empty()) {
                size_t x = stack.back();
                stack.pop_back();
                for (size_t to = 0; to < n; ++to)
                    if (direct[x][to] && !seen[to]) {
                        seen[to] = true;
                        stack.push_back(to);
                    }
            }
            for (size_t to = 0; to < n; ++to)
                if (seen[to] && !direct[from][to] && to != from)
                    graph.orderings.push_back({from, to, Ordering::Kind::nat});
        }
        sort(graph.orderings.begin(), graph.orderings.end());
    }

public:
    Extractor(const PlanningModel &m, const LandmarkOptions &options)
        : m(m), options(options), deleted(m.table().size()) {
        for (const Action &a : m.actions())
            for (const ConditionalEffect &e : a.effects)
                for (FluentId p : e.dels)
                    deleted.insert(p);
    }

    LandmarkGraph run() {
        for (FluentId g : m.goal())
            intern(DnfFormula::atom(g), true);
        while (!open.empty()) {
            size_t id = open.front();
            open.pop_front();
            expand(id);
        }
        add_transitive_orderings();
        return move(graph);
    }
};
}

LandmarkGraph extract_landmarks(const PlanningModel &m, const LandmarkOptions &options) {
    if (options.check_solvable) {
        SearchResult r = decide_solvable(m);
        if (r.exhausted())
            throw ResourceExhausted("landmark extraction: solvability check hit the " + r.limit);
        if (!r.solvable())
            throw PreconditionError("landmark extraction needs a solvable model");
    }
    return Extractor(m, options).run();
}

LandmarkGraph goal_landmarks(const PlanningModel &m) {
    LandmarkGraph g;
    for (FluentId p : m.goal())
        g.add_landmark(DnfFormula::atom(p), true, m.init().contains(p));
    return g;
}

vector<size_t> linearize(const LandmarkGraph &g) {
    size_t n = g.landmarks.size();
    vector<size_t> indegree(n, 0);
    vector<vector<size_t>> successors(n);
    set<pair<size_t, size_t>> edges;
    for (const Ordering &o : g.orderings) {
        if (o.from >= n || o.to >= n)
            throw PreconditionError("ordering refers to an unknown landmark");
        if (edges.insert({o.from, o.to}).second) {
            successors[o.from].push_back(o.to);
            ++indegree[o.to];
        }
    }
    using Key = pair<int, size_t>;
    auto key = [&](size_t id) {return Key(g.landmarks[id].initially_true ? 0 : 1, id);};
    priority_queue<Key, vector<Key>, greater<Key>> ready;
    for (size_t id = 0; id < n; ++id)
        if (indegree[id] == 0)
            ready.push(key(id));
    vector<size_t> order;
    while (!ready.empty()) {
        size_t id = ready.top().second;
        ready.pop();
        order.push_back(id);
        for (size_t next : successors[id])
            if (--indegree[next] == 0)
                ready.push(key(next));
    }
    if (order.size() != n)
        throw PreconditionError("landmark orderings contain a cycle");
    return order;
}

bool verify_landmark_oracle(const PlanningModel &m, const DnfFormula &phi, size_t max_len,
                            uint64_t budget) {
    for (const Plan &plan : enumerate_plans(m, max_len, budget)) {
        State s = m.init();
        bool seen = holds(s, phi);
        for (const string &name : plan.actions) {
            if (seen)
                break;
            s = apply_action(s, m.action(name));
            seen = holds(s, phi);
        }
        if (!seen)
            return false;
    }
    return true;
}
}
