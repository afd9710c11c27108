#ifndef PLEXPLAIN_ABSTRACTION_H
#define PLEXPLAIN_ABSTRACTION_H

#include "model.h"
#include "search.h"

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

namespace plexplain {
// Removes P from every component of m. Actions are kept even if their
// effects become empty, so the result is a logically complete abstraction.
PlanningModel project_model(const PlanningModel &m, const FluentSet &projected);

struct FluentGroup {
    std::string name;
    std::vector<FluentId> members;
};

// Bitmask over lattice group indices (groups are kept sorted by name).
using GroupMask = std::uint64_t;

class LatticeNode {
    friend class AbstractionLattice;
    GroupMask mask_;
    std::vector<std::string> projected_;
    PlanningModel model_;
    mutable std::once_flag decided;
    mutable SearchResult result_;
public:
    LatticeNode(GroupMask mask, std::vector<std::string> projected, PlanningModel model)
        : mask_(mask), projected_(std::move(projected)), model_(std::move(model)) {}
    GroupMask mask() const {return mask_;}
    const std::vector<std::string> &projected() const {return projected_;}
    const PlanningModel &model() const {return model_;}
};

/*
  Lazily built powerset lattice over named fluent groups. Node models are
  memoized; each node's solvability is decided at most once. A node is
  excluded when its projected set contains a forbidden combination, so the
  admissible nodes stay closed under concretization.
*/
class AbstractionLattice {
    PlanningModel root_;
    std::vector<FluentGroup> groups_;
    std::vector<GroupMask> forbidden_;
    SearchLimits limits_;
    mutable std::mutex mutex;
    mutable std::map<GroupMask, std::unique_ptr<LatticeNode>> nodes;
public:
    AbstractionLattice(PlanningModel root, std::vector<FluentGroup> groups,
                       std::vector<std::vector<std::string>> forbidden = {},
                       SearchLimits limits = {});

    const PlanningModel &root_model() const {return root_;}
    const std::vector<FluentGroup> &groups() const {return groups_;}
    const SearchLimits &limits() const {return limits_;}
    std::size_t num_groups() const {return groups_.size();}
    GroupMask full_mask() const;
    GroupMask mask_of(const std::vector<std::string> &group_names) const;
    std::vector<std::string> names_of(GroupMask mask) const;
    FluentSet members_of(GroupMask mask) const;
    bool admissible(GroupMask mask) const;
    std::size_t num_admissible_nodes() const;

    const LatticeNode &node(GroupMask mask) const;
    const LatticeNode &root() const {return node(0);}
    const LatticeNode &top() const;
    // Throws ResourceExhausted when the node's search ran out of budget.
    const SearchResult &solve(const LatticeNode &n) const;
    bool solvable(const LatticeNode &n) const {return solve(n).solvable();}
    // Admissible nodes with no admissible single-group extension.
    std::vector<const LatticeNode *> maximal_nodes() const;
};

AbstractionLattice build_lattice(const PlanningModel &m, std::vector<FluentGroup> groups,
                                 SearchLimits limits = {});

const LatticeNode &concretize(const AbstractionLattice &lat, const LatticeNode &node,
                              const std::vector<std::string> &restored);

// Solvable maximal lattice elements, ordered lexicographically by projected names.
std::vector<const LatticeNode *> minimum_abstraction_set(const AbstractionLattice &lat);

struct ModelUpdate {
    enum class Kind {init, goal, precondition, condition, add_effect, del_effect};
    Kind kind;
    std::optional<std::string> action;
    FluentId fluent;

    friend bool operator==(const ModelUpdate &, const ModelUpdate &) = default;
    friend auto operator<=>(const ModelUpdate &, const ModelUpdate &) = default;
};

std::string to_string(ModelUpdate::Kind kind);
std::optional<ModelUpdate::Kind> parse_update_kind(const std::string &text);

// One update per occurrence of a restored fluent in conc. abs must be a
// projection of conc over the same fluent table.
std::vector<ModelUpdate> diff_models(const PlanningModel &abs, const PlanningModel &conc);

struct ExplanatorySet {
    std::vector<std::string> groups;
    std::size_t cost = 0;
    std::vector<ModelUpdate> updates;

    friend bool operator==(const ExplanatorySet &, const ExplanatorySet &) = default;
};

// Raised when no explanation exists relative to the lattice.
class NoExplanation : public std::runtime_error {
public:
    enum class Reason {solvable_root, unsolvable_at_top};
    Reason reason;
    NoExplanation(Reason reason, const std::string &message)
        : std::runtime_error(message), reason(reason) {}
};

// Cost of restoring E: unique updates over every member of M_min.
ExplanatorySet explanation_cost(const AbstractionLattice &lat,
                                const std::vector<const LatticeNode *> &minimum,
                                GroupMask restored);

ExplanatorySet find_explanatory_fluents(const AbstractionLattice &lat);
}

#endif
