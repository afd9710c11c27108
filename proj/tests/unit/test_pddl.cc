#include "fixtures.h"
#include "oracles.h"

#include "plexplain/errors.h"
#include "plexplain/pddl.h"

#include <doctest.h>

using namespace std;
using namespace plexplain;
using namespace plexplain::testing;

namespace {
const char *typed_domain = R"(
(define (domain depot)
  (:requirements :strips :typing :negative-preconditions :conditional-effects :equality)
  (:types place crate - object truck - object)
  (:predicates (at ?t - truck ?p - place) (on ?c - crate ?p - place) (loaded ?c - crate)
               (empty ?t - truck))
  (:action drive
    :parameters (?t - truck ?a - place ?b - place)
    :precondition (and (at ?t ?a) (not (= ?a ?b)))
    :effect (and (not (at ?t ?a)) (at ?t ?b)))
  (:action load
    :parameters (?t - truck ?c - crate ?p - place)
    :precondition (and (at ?t ?p) (on ?c ?p) (not (loaded ?c)))
    :effect (and (loaded ?c) (not (on ?c ?p)) (when (empty ?t) (not (empty ?t))))))
)";
const char *typed_problem = R"(
(define (problem p1) (:domain depot)
  (:objects home shop - place c1 - crate t1 - truck)
  (:init (at t1 home) (on c1 shop) (empty t1))
  (:goal (and (loaded c1) (at t1 home))))
)";
}

TEST_CASE("MiniRover grounding") {
    PlanningModel m = minirover_a();
    // The interned atoms of init, goal, preconditions and effects.
    CHECK(m.num_fluents() == 7);
    CHECK(m.actions().size() == 2);
    CHECK(m.init().count() == 4);
    CHECK(join_names(m, m.goal()) == "at_l3");
    // move_l1_l2 survives even though clear_l2 is static and false.
    CHECK(m.find_action("move_l1_l2"));
}

TEST_CASE("typed grounding with equality and negative preconditions") {
    PlanningModel m = load_model(typed_domain, typed_problem);
    // drive ?a != ?b leaves two groundings; load is typed to the crate.
    CHECK(m.find_action("drive_t1_home_shop"));
    CHECK_FALSE(m.find_action("drive_t1_home_home"));
    CHECK(m.find_action("load_t1_c1_shop"));
    FluentId not_loaded = fluent(m, "not-loaded_c1");
    CHECK(m.init().contains(not_loaded));
    const Action &load = m.action("load_t1_c1_shop");
    CHECK(find(load.prec.begin(), load.prec.end(), not_loaded) != load.prec.end());
    CHECK(load.effects.size() == 2);
    // Adding loaded deletes its complement.
    State s = m.init();
    s = oracle::step(s, m.action("drive_t1_home_shop"));
    s = oracle::step(s, load);
    CHECK_FALSE(s.contains(not_loaded));
    CHECK_FALSE(s.contains(fluent(m, "empty_t1")));
    CHECK(oracle::solvable(m));
}

TEST_CASE("parse errors carry positions") {
    CHECK_THROWS_AS(load_model("(define (domain d)", "(define (problem p))"), ParseError);
    try {
        load_model("(define (domain d)\n  (:requirements :fluents))", typed_problem);
        FAIL("expected a parse error");
    } catch (const ParseError &e) {
        CHECK(e.line() == 2);
        CHECK(string(e.what()).find("unsupported requirement") != string::npos);
    }
    CHECK_THROWS_AS(load_model(typed_domain, R"((define (problem p) (:domain depot)
        (:objects a - place) (:init (at t9 a)) (:goal (at t9 a))))"),
                    InputError);
}

TEST_CASE("write_pddl reproduces the model") {
    for (PlanningModel m : {minirover_a(), load_model(typed_domain, typed_problem)}) {
        PddlText text = write_pddl(m, "copy");
        PlanningModel again = load_model(text.domain, text.problem);
        CHECK(again.num_fluents() == m.num_fluents());
        CHECK(again.actions().size() == m.actions().size());
        CHECK(oracle::solvable(again) == oracle::solvable(m));
        CHECK(oracle::reachable_states(again).size() == oracle::reachable_states(m).size());
    }
}

TEST_CASE("formula parsing accepts both spellings") {
    PlanningModel m = minirover_a();
    DnfFormula a = normalize_dnf(parse_formula("(at l2)", m.table()));
    DnfFormula b = normalize_dnf(parse_formula("at_l2", m.table()));
    CHECK(a == b);
    CHECK_THROWS_AS(parse_formula("(at l9)", m.table()), InputError);
    CHECK(pddl_name("not-clear_L2") == "not-clear_l2");
    CHECK(pddl_name("2x") == "f_2x");
}

TEST_CASE("undeclared parent types derive from object; cycles are rejected") {
    const char *domain = R"(
(define (domain d) (:types crate - thing thing - item)
  (:predicates (ok ?c - crate))
  (:action fix :parameters (?c - item) :precondition () :effect (ok ?c)))
)";
    const char *problem = R"(
(define (problem p) (:domain d) (:objects c1 - crate) (:init) (:goal (ok c1)))
)";
    PlanningModel m = load_model(domain, problem);
    CHECK(m.find_action("fix_c1").has_value());
    const char *cyclic = R"(
(define (domain d) (:types a - b b - a) (:predicates (p)) (:action x :parameters () :effect (p)))
)";
    CHECK_THROWS_AS(load_model(cyclic, problem), InputError);
}
