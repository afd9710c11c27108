#ifndef PLEXPLAIN_PDDL_H
#define PLEXPLAIN_PDDL_H

#include "dnf.h"
#include "model.h"
#include "sexpr.h"

#include <map>
#include <set>
#include <string>
#include <vector>

namespace plexplain {
/*
  Input subset: :strips, :typing, :negative-preconditions, :conditional-effects
  (plus :equality). Equality literals are evaluated during grounding.
*/
struct LiftedAtom {
    std::string predicate;
    std::vector<std::string> terms;   // variables start with '?'
};

struct LiftedLiteral {
    LiftedAtom atom;
    bool positive = true;
};

struct LiftedEffect {
    std::vector<LiftedLiteral> condition;   // empty for the unconditional part
    std::vector<LiftedAtom> adds;
    std::vector<LiftedAtom> dels;
};

struct TypedName {
    std::string name;
    std::string type;
};

struct ActionSchema {
    std::string name;
    std::vector<TypedName> parameters;
    std::vector<LiftedLiteral> precondition;
    std::vector<LiftedEffect> effects;
};

struct PredicateDecl {
    std::string name;
    std::vector<std::string> param_types;
};

struct LiftedModel {
    std::string domain_name;
    std::string problem_name;
    std::set<std::string> requirements;
    std::map<std::string, std::string> type_parent;   // "object" is the root
    std::map<std::string, PredicateDecl> predicates;
    std::vector<std::string> object_order;
    std::map<std::string, std::string> object_types;  // constants and objects
    std::vector<ActionSchema> schemas;
    std::vector<LiftedAtom> init;
    std::vector<LiftedLiteral> goal;

    bool is_subtype(const std::string &type, const std::string &ancestor) const;
    std::vector<std::string> objects_of_type(const std::string &type) const;
};

LiftedModel parse_model(std::string_view domain_text, std::string_view problem_text);
PlanningModel ground(const LiftedModel &lifted);
PlanningModel load_model(std::string_view domain_text, std::string_view problem_text);

// Formula in goal syntax: (at l2), (and ...), (or ...), or a bare grounded name "at_l2".
RawFormula parse_formula(const SExpr &expr, const FluentTable &table);
RawFormula parse_formula(std::string_view text, const FluentTable &table);

struct PddlText {
    std::string domain;
    std::string problem;
};

// Propositional rendering: each active fluent becomes a zero-ary predicate.
PddlText write_pddl(const PlanningModel &m, const std::string &name = "grounded");
std::string pddl_name(const std::string &raw);
}

#endif
