#ifndef PLEXPLAIN_MODEL_H
#define PLEXPLAIN_MODEL_H

#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace plexplain {
using FluentId = std::uint32_t;

struct Fluent {
    std::string name;
    std::vector<std::string> args;

    // Predicate name with the complement prefix removed ("not-clear" -> "clear").
    std::string base_predicate() const;
    bool is_complement() const;
    // "at_l1" for (at l1); zero-ary fluents print as their name.
    std::string display() const;
};

/*
  Interns (name, args) pairs to dense ids. One table is shared by every
  model of a lattice so that projections compare by id. Compilations that
  introduce meta fluents copy the table and append; base ids are preserved.
*/
class FluentTable {
    std::vector<Fluent> fluents;
    std::map<std::pair<std::string, std::vector<std::string>>, FluentId> index;
    std::unordered_map<std::string, FluentId> display_index;
public:
    FluentId intern(const std::string &name, const std::vector<std::string> &args = {});
    std::optional<FluentId> find(const std::string &name,
                                 const std::vector<std::string> &args) const;
    std::optional<FluentId> find_display(std::string_view display) const;
    const Fluent &operator[](FluentId id) const {return fluents[id];}
    std::string display(FluentId id) const {return display_cache[id];}
    std::size_t size() const {return fluents.size();}
private:
    std::vector<std::string> display_cache;
};

// Fixed-universe bitset over fluent ids; used both for states and fluent sets.
class FluentSet {
    std::vector<std::uint64_t> words;
    std::size_t universe = 0;
public:
    FluentSet() = default;
    explicit FluentSet(std::size_t universe_size);
    FluentSet(std::size_t universe_size, const std::vector<FluentId> &members);

    std::size_t universe_size() const {return universe;}
    bool contains(FluentId id) const {
        return id < universe && (words[id >> 6] >> (id & 63)) & 1u;
    }
    void insert(FluentId id) {words[id >> 6] |= std::uint64_t(1) << (id & 63);}
    void erase(FluentId id) {words[id >> 6] &= ~(std::uint64_t(1) << (id & 63));}
    bool contains_all(const std::vector<FluentId> &ids) const;
    bool is_subset_of(const FluentSet &other) const;
    bool empty() const;
    std::size_t count() const;
    std::vector<FluentId> to_vector() const;
    FluentSet resized(std::size_t universe_size) const;

    FluentSet &operator|=(const FluentSet &other);
    FluentSet &operator-=(const FluentSet &other);
    FluentSet &operator&=(const FluentSet &other);

    std::size_t hash() const;
    friend bool operator==(const FluentSet &a, const FluentSet &b) {
        return a.universe == b.universe && a.words == b.words;
    }
    friend bool operator<(const FluentSet &a, const FluentSet &b) {
        return a.words < b.words;
    }
};

using State = FluentSet;

struct FluentSetHash {
    std::size_t operator()(const FluentSet &s) const {return s.hash();}
};

struct ConditionalEffect {
    std::vector<FluentId> condition;
    std::vector<FluentId> adds;
    std::vector<FluentId> dels;

    friend bool operator==(const ConditionalEffect &, const ConditionalEffect &) = default;
};

struct Action {
    std::string name;
    std::vector<FluentId> prec;
    // Plain STRIPS actions carry exactly one effect with an empty condition.
    std::vector<ConditionalEffect> effects;

    friend bool operator==(const Action &, const Action &) = default;
};

struct Plan {
    std::vector<std::string> actions;

    std::size_t size() const {return actions.size();}
    bool empty() const {return actions.empty();}
    friend bool operator==(const Plan &, const Plan &) = default;
    friend auto operator<=>(const Plan &, const Plan &) = default;
};

std::string to_string(const Plan &plan);

/*
  Grounded STRIPS model <F, A, I, G> with optional conditional effects.
  Immutable after construction; all id vectors are kept sorted and unique.
*/
class PlanningModel {
    std::shared_ptr<const FluentTable> table_;
    FluentSet fluents_;
    std::vector<Action> actions_;
    State init_;
    std::vector<FluentId> goal_;
    std::unordered_map<std::string, std::size_t> action_index;
public:
    PlanningModel(std::shared_ptr<const FluentTable> table, FluentSet fluents,
                  std::vector<Action> actions, State init, std::vector<FluentId> goal);

    const std::shared_ptr<const FluentTable> &table_ptr() const {return table_;}
    const FluentTable &table() const {return *table_;}
    const FluentSet &fluents() const {return fluents_;}
    const std::vector<Action> &actions() const {return actions_;}
    const State &init() const {return init_;}
    const std::vector<FluentId> &goal() const {return goal_;}

    std::optional<std::size_t> find_action(std::string_view name) const;
    const Action &action(std::string_view name) const;
    std::string name(FluentId id) const {return table_->display(id);}
    std::size_t num_fluents() const {return fluents_.count();}
    bool is_goal(const State &s) const {return s.contains_all(goal_);}

    // Structural equality; tables must be the same object or equal in content.
    friend bool operator==(const PlanningModel &a, const PlanningModel &b);
};

State apply_action(const State &s, const Action &a);
// Like apply_action but without the precondition check.
State apply_effects(const State &s, const Action &a);
bool applicable(const State &s, const Action &a);

struct ValidationTrace {
    enum class Status {valid, failed};
    Status status = Status::valid;
    std::optional<std::size_t> failing_index;
    std::optional<std::vector<FluentId>> unsatisfied;
    std::vector<State> states;

    bool valid() const {return status == Status::valid;}
    friend bool operator==(const ValidationTrace &, const ValidationTrace &) = default;
};

// A failing_index equal to the plan length denotes an unmet goal.
ValidationTrace validate_plan(const PlanningModel &m, const Plan &plan);

std::vector<FluentId> sorted_unique(std::vector<FluentId> ids);
std::string join_names(const PlanningModel &m, const std::vector<FluentId> &ids,
                       const std::string &sep = ", ");
}

#endif
