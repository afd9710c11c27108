#ifndef PLEXPLAIN_DNF_H
#define PLEXPLAIN_DNF_H

#include "model.h"

#include <string>
#include <vector>

namespace plexplain {
// Unnormalized boolean formula over fluents, as written in input files.
struct RawFormula {
    enum class Kind {atom, conjunction, disjunction, negation};
    Kind kind = Kind::atom;
    FluentId atom = 0;
    std::vector<RawFormula> children;

    static RawFormula make_atom(FluentId id) {return {Kind::atom, id, {}};}
    static RawFormula make_and(std::vector<RawFormula> children) {
        return {Kind::conjunction, 0, std::move(children)};
    }
    static RawFormula make_or(std::vector<RawFormula> children) {
        return {Kind::disjunction, 0, std::move(children)};
    }
    static RawFormula make_not(RawFormula child) {
        return {Kind::negation, 0, {std::move(child)}};
    }
};

/*
  Disjunction of conjunctions of positive fluents. Kept minimal: no disjunct
  is a superset of another, and disjuncts are sorted. The empty disjunct set
  is false; a single empty conjunction is true.
*/
class DnfFormula {
    std::vector<std::vector<FluentId>> disjuncts_;
public:
    DnfFormula() = default;
    explicit DnfFormula(std::vector<std::vector<FluentId>> disjuncts);

    static DnfFormula atom(FluentId id) {
        return DnfFormula(std::vector<std::vector<FluentId>>{{id}});
    }
    static DnfFormula conjunction(std::vector<FluentId> ids) {
        return DnfFormula(std::vector<std::vector<FluentId>>{std::move(ids)});
    }
    static DnfFormula falsum() {return DnfFormula();}
    static DnfFormula verum() {
        return DnfFormula(std::vector<std::vector<FluentId>>(1));
    }

    const std::vector<std::vector<FluentId>> &disjuncts() const {return disjuncts_;}
    bool is_false() const {return disjuncts_.empty();}
    bool is_true() const {return disjuncts_.size() == 1 && disjuncts_[0].empty();}
    std::size_t size() const {return disjuncts_.size();}
    std::size_t max_conjunct_size() const;
    std::vector<FluentId> fluents() const;

    friend bool operator==(const DnfFormula &, const DnfFormula &) = default;
    friend auto operator<=>(const DnfFormula &, const DnfFormula &) = default;
};

DnfFormula normalize_dnf(const RawFormula &raw);
bool holds(const State &s, const DnfFormula &phi);
bool holds(const State &s, const RawFormula &raw);

DnfFormula dnf_and(const DnfFormula &a, const DnfFormula &b);
DnfFormula dnf_or(const DnfFormula &a, const DnfFormula &b);
// Drops literals outside the given fluent set (projection of a formula).
DnfFormula restrict_to(const DnfFormula &phi, const FluentSet &fluents);

// "at_l2", "(and a b)", "(or a (and b c))"; false prints as "(or)".
std::string to_string(const DnfFormula &phi, const FluentTable &table);
}

#endif
