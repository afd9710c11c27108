#ifndef PLEXPLAIN_TESTS_FIXTURES_H
#define PLEXPLAIN_TESTS_FIXTURES_H

#include "plexplain/abstraction.h"
#include "plexplain/advice.h"
#include "plexplain/explain.h"
#include "plexplain/model.h"

#include <optional>
#include <random>
#include <string>
#include <vector>

namespace plexplain::testing {
std::string data_path(const std::string &relative);
std::string read_text(const std::string &path);

struct ActionSpec {
    std::string name;
    std::vector<std::string> prec;
    std::vector<std::string> add;
    std::vector<std::string> del;
};

// Fluent "conn_l1_l2" is interned as predicate conn with arguments (l1, l2).
PlanningModel build_model(const std::vector<std::string> &fluents,
                          const std::vector<ActionSpec> &actions,
                          const std::vector<std::string> &init,
                          const std::vector<std::string> &goal);

FluentId fluent(const PlanningModel &m, const std::string &display);
DnfFormula atom(const PlanningModel &m, const std::string &display);
DnfFormula any_of(const PlanningModel &m, const std::vector<std::string> &displays);
FluentSet fluent_set(const PlanningModel &m, const std::vector<std::string> &displays);

PlanningModel minirover_a();
PlanningModel minirover_norocks();
// l1 -> l2 -> l4 and l1 -> l3 -> l4, no rocks.
PlanningModel two_path();
// done_a and done_b are each achievable, but not both: only the final
// goal fails.
PlanningModel jointly_blocked();

std::vector<FluentGroup> groups_by_predicate(const PlanningModel &m,
                                             const std::vector<std::string> &predicates);

struct MicroCase {
    std::string label;
    PlanningModel model;
    LatticeSpec spec;
    std::optional<ConstraintFSA> advice;
};

// Random model over at most 12 fluents and 8 actions with 2 to 4 predicate
// groups. Made unsolvable by deleting fluents (or, if use_advice, by a
// random advice item). nullopt when the draw could not be made unsolvable.
std::optional<MicroCase> random_micro_case(std::mt19937 &rng, bool use_advice);

// Small solvable models for exhaustive checks: the named fixtures plus
// random solvable draws.
std::vector<std::pair<std::string, PlanningModel>> solvable_fixtures(std::size_t random_count,
                                                                      unsigned seed);
}

#endif
