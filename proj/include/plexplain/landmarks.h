#ifndef PLEXPLAIN_LANDMARKS_H
#define PLEXPLAIN_LANDMARKS_H

#include "dnf.h"
#include "model.h"

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace plexplain {
struct Landmark {
    std::size_t id = 0;
    DnfFormula formula;
    bool is_goal_conjunct = false;
    bool initially_true = false;

    friend bool operator==(const Landmark &, const Landmark &) = default;
};

struct Ordering {
    enum class Kind {nat, nec, gnec};
    std::size_t from;
    std::size_t to;
    Kind kind;

    friend bool operator==(const Ordering &, const Ordering &) = default;
    friend auto operator<=>(const Ordering &, const Ordering &) = default;
};

std::string to_string(Ordering::Kind kind);

struct LandmarkGraph {
    std::vector<Landmark> landmarks;   // landmarks[i].id == i
    std::vector<Ordering> orderings;

    const Landmark &landmark(std::size_t id) const;
    // Predecessors of `to` through orderings of the given kind.
    std::vector<std::size_t> predecessors(std::size_t to, Ordering::Kind kind) const;
    bool has_edge(std::size_t from, std::size_t to) const;
    std::size_t add_landmark(DnfFormula formula, bool goal_conjunct, bool initially_true);
};

/*
  Relaxed planning graph back-chaining. Goal conjuncts seed the set; for a
  landmark not true initially, facts (or same-predicate disjunctions of at
  most four facts) shared by every first achiever become candidates, kept
  only if the relaxed task becomes unsolvable once their achievers are
  removed. Facts that are true initially and never deleted are skipped
  unless they are goal conjuncts.
*/
struct LandmarkOptions {
    bool check_solvable = true;
    std::size_t max_disjuncts = 4;
};

LandmarkGraph extract_landmarks(const PlanningModel &m, const LandmarkOptions &options = {});

// Landmarks for every goal conjunct, without orderings.
LandmarkGraph goal_landmarks(const PlanningModel &m);

// Removes the landmarks selected by `drop`, renumbering the rest. Paths that
// ran through removed landmarks are kept as nat orderings.
LandmarkGraph drop_landmarks(const LandmarkGraph &g,
                             const std::function<bool(const Landmark &)> &drop);

// Topological order; ties go to initially-true landmarks, then ascending id.
std::vector<std::size_t> linearize(const LandmarkGraph &g);

// Whether every plan of length <= max_len visits a state satisfying phi.
bool verify_landmark_oracle(const PlanningModel &m, const DnfFormula &phi, std::size_t max_len,
                            std::uint64_t budget = 20'000'000);

// Facts reachable under the delete relaxation, skipping effects for which
// `skip(action index, effect index)` is true.
FluentSet relaxed_reachable(const PlanningModel &m,
                            const std::function<bool(std::size_t, std::size_t)> &skip = {});
}

#endif
