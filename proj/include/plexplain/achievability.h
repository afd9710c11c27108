#ifndef PLEXPLAIN_ACHIEVABILITY_H
#define PLEXPLAIN_ACHIEVABILITY_H

#include "landmarks.h"
#include "model.h"
#include "search.h"

#include <optional>
#include <string>
#include <vector>

namespace plexplain {
struct AchievabilityModel {
    PlanningModel model;
    // Indexed by landmark id; only landmarks that can influence the target
    // (the target and its ancestors) get meta fluents.
    std::vector<std::optional<FluentId>> achieved;
    std::vector<std::optional<FluentId>> unset;
    std::vector<std::optional<FluentId>> first_time;
    // Landmarks whose orderings were not enforced because the expansion cap hit.
    std::vector<std::size_t> unenforced;
    std::vector<std::string> warnings;
};

struct AchievabilityOptions {
    std::size_t max_expanded_effects = 64;
};

/*
  M_phi: solvable iff the target can be achieved for the first time at a
  step that honors every ordering into it (and, transitively, into its
  predecessors). Conditions are read on the pre-state; every action clears
  first_time_achieved unless it re-adds it, so a plan ends right at the
  achieving step.
*/
AchievabilityModel compile_achievability(const PlanningModel &m, const LandmarkGraph &lg,
                                         std::size_t target,
                                         const AchievabilityOptions &options = {});

struct FailedSubgoal {
    // nullopt marks the final goal (every extracted landmark was achievable).
    std::optional<std::size_t> landmark;
    DnfFormula formula;
    std::vector<std::size_t> achieved_prefix;
    std::vector<std::string> warnings;

    bool is_final_goal() const {return !landmark.has_value();}
};

// lg plus the goal conjunction as a pseudo-landmark, naturally ordered after
// every landmark that precedes a goal conjunct.
LandmarkGraph with_goal_landmark(const LandmarkGraph &lg, const PlanningModel &m,
                                 std::size_t &goal_id);

// Throws ResourceExhausted when a compiled check runs out of budget.
FailedSubgoal first_unachievable(const PlanningModel &m, const LandmarkGraph &lg,
                                 const std::vector<std::size_t> &seq,
                                 const SearchLimits &limits = {},
                                 const AchievabilityOptions &options = {});
}

#endif
