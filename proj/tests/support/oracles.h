#ifndef PLEXPLAIN_TESTS_ORACLES_H
#define PLEXPLAIN_TESTS_ORACLES_H

#include "plexplain/abstraction.h"
#include "plexplain/advice.h"
#include "plexplain/landmarks.h"
#include "plexplain/model.h"

#include <optional>
#include <set>
#include <string>
#include <vector>

// Brute-force reference implementations. They share only the model data
// types with the library and re-derive transition semantics on their own.
namespace plexplain::testing::oracle {
State step(const State &s, const Action &a);
bool step_ok(const State &s, const Action &a);

std::vector<State> reachable_states(const PlanningModel &m);
bool solvable(const PlanningModel &m);

// Every plan of length <= max_len (own enumeration).
std::set<Plan> plans(const PlanningModel &m, std::size_t max_len);

// No goal state is reachable through states where phi is false.
bool is_landmark(const PlanningModel &m, const DnfFormula &phi);
// On every plan, psi holds right before phi first becomes true.
bool gnec_sound(const PlanningModel &m, const DnfFormula &psi, const DnfFormula &phi);
// On every plan, psi holds right before every step that makes phi true.
bool nec_sound(const PlanningModel &m, const DnfFormula &psi, const DnfFormula &phi);

// Achievability of `target` under the graph's orderings, by search over
// base states annotated with which landmarks were achieved and first achieved.
bool achievable(const PlanningModel &m, const LandmarkGraph &lg, std::size_t target);

// Stripped plans of the constrained model with at most max_len base steps.
std::set<Plan> constrained_plans(const ConstrainedModel &cm, std::size_t max_len);
// Base plans of length <= max_len accepted by the automaton.
std::set<Plan> accepted_plans(const PlanningModel &m, const ConstraintFSA &f,
                              std::size_t max_len);
// Own automaton run over an executable action sequence.
bool run_accepts(const ConstraintFSA &f, const Plan &plan, const PlanningModel &m);

struct Cheapest {
    std::vector<std::string> groups;
    std::size_t cost;
};

// Exhaustive minimum over all group subsets; nullopt if M_min is empty or
// the root is solvable.
std::optional<Cheapest> cheapest_explanation(const AbstractionLattice &lat);
// Unique (kind, action, fluent) occurrences of `restored` in conc.
std::set<std::tuple<int, std::string, FluentId>> occurrences(const PlanningModel &conc,
                                                           const FluentSet &restored);
}

#endif
