#ifndef PLEXPLAIN_EXPLAIN_H
#define PLEXPLAIN_EXPLAIN_H

#include "abstraction.h"
#include "achievability.h"
#include "advice.h"
#include "landmarks.h"
#include "model.h"
#include "search.h"

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace plexplain {
struct GroupSpec {
    std::string name;
    std::vector<std::string> predicates;   // every grounding, complements included
    std::vector<std::string> fluents;      // explicit grounded names such as "at_l2"
};

struct LatticeSpec {
    std::vector<GroupSpec> groups;
    std::vector<std::vector<std::string>> forbidden;
};

// {"groups": [{"name", "predicates", "fluents"?}], "forbidden": [[names...]]}
LatticeSpec parse_lattice_spec(std::string_view text);

// Groups over the model's base fluents. In-state, goal-accept and meta
// fluents never join a group. Groups that match nothing are rejected.
std::vector<FluentGroup> resolve_groups(const LatticeSpec &spec, const PlanningModel &m,
                                        const FluentSet &excluded = {});

enum class ExemplarMode {automatic, always, never};

struct ExplainOptions {
    SearchLimits limits;
    ExemplarMode exemplar = ExemplarMode::automatic;
    AchievabilityOptions achievability;
    // Receives the constrained model and the failed subgoal's M_phi.
    std::function<void(const std::string &, const PlanningModel &)> on_compiled;
};

struct RenderedUpdate {
    std::string kind;
    std::optional<std::string> action;
    std::string fluent;
    friend bool operator==(const RenderedUpdate &, const RenderedUpdate &) = default;
};

struct FailedReport {
    std::string formula;
    std::vector<std::string> prefix;
    std::vector<std::string> level;   // projected groups at the explanatory level
    bool final_goal = false;
    friend bool operator==(const FailedReport &, const FailedReport &) = default;
};

struct Exemplar {
    Plan plan;
    std::optional<std::size_t> failing_index;
    std::vector<std::string> missing;
    friend bool operator==(const Exemplar &, const Exemplar &) = default;
};

struct Explanation {
    enum class Status {explained, solvable_root, unsolvable_at_top};
    Status status = Status::explained;
    std::vector<std::string> groups;
    std::size_t cost = 0;
    std::vector<RenderedUpdate> updates;
    std::optional<FailedReport> failed;
    std::vector<FailedReport> secondary;   // other members of M_min, in order
    std::optional<Exemplar> exemplar;
    std::optional<Plan> plan;              // solvable-root only
    bool advice_applied = false;
    std::vector<std::string> warnings;

    friend bool operator==(const Explanation &, const Explanation &) = default;
};

std::string to_string(Explanation::Status status);

/*
  Full pipeline. The effective model is m, or compose(m, advice) when advice
  is given. Non-degenerate results are re-checked before returning.
*/
Explanation explain(const PlanningModel &m, const LatticeSpec &spec,
                    const std::optional<ConstraintFSA> &advice = std::nullopt,
                    const ExplainOptions &options = {});

// Same, over an already built lattice. With advice, lat is built over
// constrained->compiled and its groups cover base fluents only.
Explanation explain_lattice(const AbstractionLattice &lat,
                            const ConstrainedModel *constrained = nullptr,
                            const ExplainOptions &options = {});

// Replays a plan of the abstract node in conc. Missing preconditions are
// restricted to `focus` when that leaves any.
ValidationTrace exemplar_failure(const AbstractionLattice &lat, const LatticeNode &abs,
                                 const PlanningModel &conc, const FluentSet &focus = {});

std::string render_json(const Explanation &e);
Explanation parse_explanation_json(std::string_view text);
std::string render_human(const Explanation &e);

// {"landmarks": [{id, formula, goal, initially_true}], "orderings": [{from, to, kind}]}
std::string render_landmarks_json(const LandmarkGraph &g, const FluentTable &table);
}

#endif
