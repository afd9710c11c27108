#ifndef PLEXPLAIN_SEARCH_H
#define PLEXPLAIN_SEARCH_H

#include "model.h"

#include <chrono>
#include <cstdint>
#include <set>
#include <string>

namespace plexplain {
struct SearchLimits {
    std::uint64_t max_expansions = 10'000'000;
    std::chrono::duration<double> max_time{300.0};
};

struct SearchResult {
    enum class Outcome {solvable, unsolvable, resource_exhausted};
    Outcome outcome = Outcome::unsolvable;
    Plan plan;
    std::string limit;   // which budget ran out
    std::uint64_t expansions = 0;

    bool solvable() const {return outcome == Outcome::solvable;}
    bool unsolvable() const {return outcome == Outcome::unsolvable;}
    bool exhausted() const {return outcome == Outcome::resource_exhausted;}
};

std::string to_string(SearchResult::Outcome outcome);

/*
  Greedy best-first search with duplicate detection. The additive
  delete-relaxation heuristic orders the open list (ties by insertion
  order) but never prunes, so "unsolvable" means the reachable state
  space was exhausted.
*/
SearchResult decide_solvable(const PlanningModel &m, const SearchLimits &limits = {});

// Additive delete-relaxation estimate; nullopt if the goal is relaxed-unreachable.
class AdditiveHeuristic {
    struct UnaryOperator {
        std::vector<FluentId> pre;
        std::vector<FluentId> eff;
    };
    std::vector<UnaryOperator> ops;
    std::vector<std::vector<std::size_t>> ops_by_pre;
    std::vector<FluentId> goal;
    std::size_t num_fluents;
public:
    explicit AdditiveHeuristic(const PlanningModel &m);
    std::optional<std::int64_t> evaluate(const State &s) const;
};

// Every valid plan of length <= max_len, as distinct action sequences.
// Throws ResourceExhausted once more than `budget` search nodes were generated.
std::set<Plan> enumerate_plans(const PlanningModel &m, std::size_t max_len,
                               std::uint64_t budget = 20'000'000);
}

#endif
