#include "fixtures.h"
#include "oracles.h"

#include "plexplain/errors.h"
#include "plexplain/search.h"

#include <doctest.h>

using namespace std;
using namespace plexplain;
using namespace plexplain::testing;

TEST_CASE("MiniRover-A is unsolvable after one expansion") {
    SearchResult r = decide_solvable(minirover_a());
    CHECK(r.unsolvable());
    CHECK(r.expansions == 1);
    CHECK(oracle::reachable_states(minirover_a()).size() == 1);
}

TEST_CASE("solvable models return a valid plan") {
    SearchResult r = decide_solvable(minirover_norocks());
    REQUIRE(r.solvable());
    CHECK(r.plan == Plan{{"move_l1_l2", "move_l2_l3"}});
    CHECK(validate_plan(minirover_norocks(), r.plan).valid());
}

TEST_CASE("budgets are reported, not mistaken for unsolvability") {
    SearchLimits tight;
    tight.max_expansions = 1;
    SearchResult r = decide_solvable(two_path(), tight);
    CHECK(r.exhausted());
    CHECK(r.limit == "expansion budget of 1");
    CHECK_THROWS_AS(enumerate_plans(two_path(), 6, 3), ResourceExhausted);
}

TEST_CASE("additive heuristic") {
    AdditiveHeuristic h(two_path());
    CHECK(h.evaluate(two_path().init()) == 2);
    AdditiveHeuristic dead(minirover_a());
    CHECK_FALSE(dead.evaluate(minirover_a().init()));
}

TEST_CASE("property: search and enumeration agree with brute force") {
    mt19937 rng(11);
    int checked = 0;
    for (int round = 0; round < 150; ++round) {
        auto c = random_micro_case(rng, false);
        if (!c)
            continue;
        ++checked;
        FluentGroup first = resolve_groups(c->spec, c->model).front();
        PlanningModel projected = project_model(
            c->model, FluentSet(c->model.table().size(), first.members));
        for (const PlanningModel &m : {c->model, projected}) {
            SearchResult r = decide_solvable(m);
            CHECK(r.solvable() == oracle::solvable(m));
            if (r.solvable())
                CHECK(validate_plan(m, r.plan).valid());
            CHECK(enumerate_plans(m, 4) == oracle::plans(m, 4));
        }
    }
    CHECK(checked > 50);
}
