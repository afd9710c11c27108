#include "fixtures.h"
#include "oracles.h"

#include "plexplain/abstraction.h"
#include "plexplain/errors.h"

#include <doctest.h>

using namespace std;
using namespace plexplain;
using namespace plexplain::testing;

namespace {
AbstractionLattice minirover_lattice() {
    PlanningModel m = minirover_a();
    return build_lattice(m, groups_by_predicate(m, {"clear", "conn"}));
}
}

TEST_CASE("projection removes a fluent everywhere") {
    PlanningModel m = minirover_a();
    PlanningModel p = project_model(m, fluent_set(m, {"clear_l2", "clear_l3"}));
    CHECK(p.num_fluents() == 5);
    CHECK(p.action("move_l1_l2").prec.size() == 2);
    CHECK_FALSE(p.init().contains(fluent(m, "clear_l3")));
    CHECK(oracle::solvable(p));
    // Same table, so the two models are directly comparable.
    CHECK(p.table_ptr() == m.table_ptr());
}

TEST_CASE("MiniRover lattice") {
    AbstractionLattice lat = minirover_lattice();
    CHECK(lat.num_admissible_nodes() == 4);
    CHECK(lat.names_of(lat.full_mask()) == vector<string>{"clear", "conn"});
    CHECK(lat.root().model().num_fluents() == 7);
    CHECK(lat.node(lat.mask_of({"conn"})).model().num_fluents() == 5);
    CHECK(lat.node(lat.mask_of({"clear"})).model().num_fluents() == 5);
    CHECK(lat.top().model().num_fluents() == 3);
    CHECK_FALSE(lat.solvable(lat.root()));
    CHECK_FALSE(lat.solvable(lat.node(lat.mask_of({"conn"}))));
    CHECK(lat.solvable(lat.node(lat.mask_of({"clear"}))));
    CHECK(lat.solvable(lat.top()));
    auto minimum = minimum_abstraction_set(lat);
    REQUIRE(minimum.size() == 1);
    CHECK(minimum[0] == &lat.top());
    CHECK(&concretize(lat, lat.top(), {"clear"}) == &lat.node(lat.mask_of({"conn"})));
    CHECK_THROWS_AS(concretize(lat, lat.root(), {"clear"}), PreconditionError);
}

TEST_CASE("MiniRover explanatory fluents") {
    AbstractionLattice lat = minirover_lattice();
    ExplanatorySet e = find_explanatory_fluents(lat);
    CHECK(e.groups == vector<string>{"clear"});
    CHECK(e.cost == 3);
    const PlanningModel &root = lat.root_model();
    vector<ModelUpdate> expected{
        {ModelUpdate::Kind::init, nullopt, fluent(root, "clear_l3")},
        {ModelUpdate::Kind::precondition, "move_l1_l2", fluent(root, "clear_l2")},
        {ModelUpdate::Kind::precondition, "move_l2_l3", fluent(root, "clear_l3")},
    };
    CHECK(e.updates == expected);
    auto oracle_best = oracle::cheapest_explanation(lat);
    REQUIRE(oracle_best);
    CHECK(oracle_best->groups == e.groups);
    CHECK(oracle_best->cost == e.cost);
}

TEST_CASE("degenerate lattices raise NoExplanation") {
    PlanningModel n = minirover_norocks();
    AbstractionLattice solvable_root = build_lattice(n, groups_by_predicate(n, {"conn"}));
    try {
        find_explanatory_fluents(solvable_root);
        FAIL("expected NoExplanation");
    } catch (const NoExplanation &e) {
        CHECK(e.reason == NoExplanation::Reason::solvable_root);
    }
    PlanningModel m = minirover_a();
    AbstractionLattice stuck = build_lattice(m, groups_by_predicate(m, {"conn"}));
    try {
        find_explanatory_fluents(stuck);
        FAIL("expected NoExplanation");
    } catch (const NoExplanation &e) {
        CHECK(e.reason == NoExplanation::Reason::unsolvable_at_top);
    }
}

TEST_CASE("forbidden combinations cut the lattice") {
    PlanningModel m = minirover_a();
    AbstractionLattice lat(m, groups_by_predicate(m, {"clear", "conn"}), {{"clear", "conn"}});
    CHECK(lat.num_admissible_nodes() == 3);
    CHECK_FALSE(lat.admissible(lat.full_mask()));
    auto maximal = lat.maximal_nodes();
    REQUIRE(maximal.size() == 2);
    CHECK(maximal[0]->projected() == vector<string>{"clear"});
    CHECK(maximal[1]->projected() == vector<string>{"conn"});
    auto minimum = minimum_abstraction_set(lat);
    REQUIRE(minimum.size() == 1);
    CHECK(minimum[0]->projected() == vector<string>{"clear"});
    CHECK(find_explanatory_fluents(lat).groups == vector<string>{"clear"});
}

TEST_CASE("lattice input validation") {
    PlanningModel m = minirover_a();
    FluentGroup a{"a", {fluent(m, "clear_l2")}};
    FluentGroup b{"b", {fluent(m, "clear_l2")}};
    CHECK_THROWS_AS(build_lattice(m, {a, b}), InputError);
    CHECK_THROWS_AS(build_lattice(m, {a, a}), InputError);
    CHECK_THROWS_AS(build_lattice(m, {FluentGroup{"empty", {}}}), InputError);
    AbstractionLattice lat = build_lattice(m, {a});
    CHECK_THROWS_AS(lat.mask_of({"missing"}), InputError);
    CHECK_THROWS_AS(lat.node(4), InputError);
}

TEST_CASE("diff_models counts every occurrence kind") {
    auto table = make_shared<FluentTable>();
    FluentId p = table->intern("p"), q = table->intern("q"), g = table->intern("g");
    FluentSet all(3, {p, q, g});
    Action a{"a", {p}, {{{q}, {g}, {p}}, {{}, {q}, {}}}};
    PlanningModel conc(table, all, {a}, State(3, {p}), {g, p});
    PlanningModel abs = project_model(conc, FluentSet(3, {p, q}));
    vector<ModelUpdate> u = diff_models(abs, conc);
    multiset<string> kinds;
    for (const ModelUpdate &x : u)
        kinds.insert(to_string(x.kind));
    CHECK(kinds == multiset<string>{"init-literal", "goal-literal", "precondition-literal",
                                    "condition-literal", "del-effect-literal",
                                    "add-effect-literal"});
    CHECK(parse_update_kind("condition-literal") == ModelUpdate::Kind::condition);
    CHECK_FALSE(parse_update_kind("bogus"));
    CHECK_THROWS_AS(diff_models(conc, abs), InputError);
}

TEST_CASE("property: explanatory search matches exhaustive enumeration") {
    mt19937 rng(5);
    int compared = 0;
    for (int round = 0; round < 120; ++round) {
        auto c = random_micro_case(rng, false);
        if (!c)
            continue;
        AbstractionLattice lat(c->model, resolve_groups(c->spec, c->model));
        auto best = oracle::cheapest_explanation(lat);
        if (!best) {
            CHECK_THROWS_AS(find_explanatory_fluents(lat), NoExplanation);
            continue;
        }
        ExplanatorySet e = find_explanatory_fluents(lat);
        CHECK(e.cost == best->cost);
        CHECK(e.groups == best->groups);
        ++compared;
    }
    CHECK(compared > 30);
}
