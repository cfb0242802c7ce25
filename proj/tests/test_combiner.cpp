#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <set>

#include "twise/combiner.hpp"
#include "twise/plan.hpp"
#include "oracle.hpp"

using namespace twise;

namespace {

std::vector<Permutation> sorted_items(const PermFamily& fam) {
    auto v = fam.materialize(fam.size());
    std::sort(v.begin(), v.end());
    return v;
}

PlanOptions no_catalog() { return PlanOptions{false, nullptr}; }

} // namespace

TEST_CASE("mu splits the ground set and relabels order-preservingly") {
    auto id2 = Permutation::identity(2);
    CHECK(make_mu({0, 1}, id2, id2) == Permutation({0, 1, 2, 3}));
    CHECK(make_mu({2, 3}, id2, id2) == Permutation({2, 3, 0, 1}));
    CHECK(make_mu({0, 2}, Permutation({1, 0}), id2) == Permutation({1, 2, 0, 3}));
    CHECK_THROWS_AS(make_mu({0, 1, 2}, id2, id2), std::invalid_argument);
    CHECK_THROWS_AS(make_mu({1, 0}, id2, id2), std::invalid_argument);
}

TEST_CASE("mu agrees with an independent formula implementation") {
    std::mt19937 rng(5);
    auto s3 = symmetric_family(3).materialize(6);
    std::uniform_int_distribution<int> pick(0, 5);
    for (BigInt r = 0; r < binomial(6, 3); ++r) {
        auto S = unrank_subset(6, 3, r);
        for (int trial = 0; trial < 4; ++trial) {
            const auto& sigma = s3[pick(rng)];
            const auto& tau = s3[pick(rng)];
            CHECK(make_mu(S, sigma, tau) == oracle::mu_reference(S, sigma, tau));
        }
    }
}

TEST_CASE("every combined element maps the chosen block onto the low half") {
    auto fam = combine(Selection::complete(8), cyclic_family(4), mobius_family(3), 1);
    auto sel = Selection::complete(8);
    std::mt19937 rng(9);
    std::uniform_int_distribution<long> pick(0, static_cast<long>(fam.size()) - 1);
    for (int trial = 0; trial < 50; ++trial) {
        BigInt idx(pick(rng));
        BigInt s_idx = idx / (4 * 24);
        auto S = sel.block(s_idx);
        auto mu = fam.get(idx);
        for (int x : S) CHECK(mu(x) < 4);
    }
}

TEST_CASE("combining the smallest inputs reproduces the full symmetric group") {
    auto fam = combine(Selection::complete(4), cyclic_family(2), symmetric_family(2), 1);
    CHECK(fam.size() == 24);
    CHECK(fam.degree() == 4);
    CHECK(sorted_items(fam) == sorted_items(symmetric_family(4)));
}

TEST_CASE("the lift takes 1-wise inputs to a 3-wise output") {
    auto fam = combine(Selection::complete(8), cyclic_family(4), mobius_family(3), 1);
    CHECK(fam.size() == 70 * 4 * 24);
    auto rep = check_uniform(fam, 3);
    CHECK(rep.pass);
    CHECK(*rep.expected_count == 20);

    // also away from powers of two
    auto deg6 = combine(Selection::complete(6), cyclic_family(3), symmetric_family(3), 1);
    auto rep6 = check_uniform(deg6, 3);
    CHECK(rep6.pass);
    CHECK(*rep6.expected_count == 3);
}

TEST_CASE("duplicate-free inputs combine injectively") {
    auto fam = combine(Selection::complete(8), cyclic_family(4), mobius_family(3), 1);
    auto items = sorted_items(fam);
    CHECK(std::adjacent_find(items.begin(), items.end()) == items.end());
}

TEST_CASE("degenerate singletons combine to the identity") {
    auto id = PermFamily::from_vector(3, {Permutation::identity(3)});
    auto sel = Selection::from_blocks(6, 3, {{0, 1, 2}});
    auto fam = combine(sel, id, id, 0);
    CHECK(fam.size() == 1);
    CHECK(fam.get(0) == Permutation::identity(6));
}

TEST_CASE("a combiner fed a weak tau family produces a detectable failure") {
    auto bad = combine(Selection::complete(8), cyclic_family(4), cyclic_family(4), 1);
    auto rep = check_uniform(bad, 3);
    CHECK_FALSE(rep.pass);
    CHECK(rep.worst.positions.size() == 3);
}

TEST_CASE("combiner hypothesis verification flags weak inputs") {
    auto good = verify_combine_preconditions(Selection::complete(4), cyclic_family(2),
                                             symmetric_family(2), 1);
    CHECK(good.pass);
    auto bad = verify_combine_preconditions(Selection::complete(8), cyclic_family(4),
                                            cyclic_family(4), 1);
    CHECK_FALSE(bad.pass);
    CHECK(bad.a_report.pass);
    CHECK_FALSE(bad.b_report.pass);
}

TEST_CASE("ordered partitions unrank distinctly and cover the ground set") {
    auto part = OrderedPartitionFamily::complete(3, 2);
    CHECK(part.size() == 90);
    std::set<std::vector<std::vector<int>>> seen;
    for (BigInt i = 0; i < part.size(); ++i) {
        auto groups = part.get(i);
        REQUIRE(groups.size() == 3);
        std::vector<char> hit(6, 0);
        for (const auto& g : groups) {
            REQUIRE(g.size() == 2);
            for (int x : g) {
                REQUIRE(x >= 0);
                REQUIRE(x < 6);
                REQUIRE_FALSE(hit[x]);
                hit[x] = 1;
            }
        }
        seen.insert(groups);
    }
    CHECK(seen.size() == 90);
}

TEST_CASE("the k-group construction lifts strength like the two-group one") {
    auto part = OrderedPartitionFamily::complete(3, 2);
    auto fam = combine_k(part, symmetric_family(2), {cyclic_family(2), cyclic_family(2)}, 1);
    CHECK(fam.size() == 720);
    CHECK(fam.degree() == 6);
    auto rep = check_uniform(fam, 3);
    CHECK(rep.pass);
    CHECK(*rep.expected_count == 6);
}

TEST_CASE("two groups reproduce the selection-based combiner as a multiset") {
    auto part = OrderedPartitionFamily::complete(2, 2);
    auto via_k = combine_k(part, symmetric_family(2), {cyclic_family(2)}, 1);
    auto via_sel = combine(Selection::complete(4), cyclic_family(2), symmetric_family(2), 1);
    CHECK(sorted_items(via_k) == sorted_items(via_sel));
}

TEST_CASE("a single fixed partition with identities interleaves blocks") {
    auto id = PermFamily::from_vector(2, {Permutation::identity(2)});
    auto part = OrderedPartitionFamily::complete(2, 2);
    // partition index 0 is ({0,1},{2,3})
    auto fam = combine_k(part, id, {id}, 0);
    CHECK(fam.get(0) == Permutation({0, 1, 2, 3}));
}

TEST_CASE("plans bottom out at known bases") {
    auto p = plan(2, 3);
    CHECK(p->kind == PlanKind::Base);
    CHECK(p->base_name == "symmetric");
    CHECK(p->size == 2);

    auto p43 = plan(4, 3, no_catalog());
    REQUIRE(p43->kind == PlanKind::Combine);
    CHECK(p43->size == 24);
    CHECK(p43->sel_size == 6);
    CHECK(p43->children[0]->base_name == "cyclic");
    CHECK(p43->children[0]->t == 1);
    CHECK(p43->children[1]->t == 3);

    auto p87 = plan(8, 7, no_catalog());
    CHECK(p87->size == 40320);

    // the catalog shortcut takes the projective family at (8,3)
    auto p83 = plan(8, 3);
    REQUIRE(p83->kind == PlanKind::Base);
    CHECK(p83->base_name == "mobius");
    CHECK(p83->size == 336);
    CHECK(plan(8, 3, no_catalog())->size == 6720);
}

TEST_CASE("plan validation names the violated form") {
    CHECK_THROWS_WITH(plan(6, 3), Catch::Matchers::ContainsSubstring("power of two"));
    CHECK_THROWS_WITH(plan(8, 4), Catch::Matchers::ContainsSubstring("2^l - 1"));
    CHECK_THROWS_AS(plan(1, 1), std::invalid_argument);
}

TEST_CASE("plan sizes stay within the headline bound") {
    for (int m = 1; m <= 6; ++m) {
        for (int l = 2; l <= 4; ++l) {
            int n = 1 << m, t = (1 << l) - 1;
            CAPTURE(m, l);
            CHECK(plan(n, t, no_catalog())->size <= size_bound(n, t));
            CHECK(plan(n, t)->size <= plan(n, t, no_catalog())->size);
        }
    }
    CHECK(plan(16, 3, no_catalog())->size == 691891200);
    CHECK(plan(16, 3)->size == 34594560);
}

TEST_CASE("building a plan realizes exactly the planned size") {
    auto p = plan(4, 3, no_catalog());
    auto fam = build(p);
    CHECK(fam.size() == p->size);
    CHECK(sorted_items(fam) == sorted_items(symmetric_family(4)));

    auto p83 = plan(8, 3, no_catalog());
    CHECK(build(p83).size() == p83->size);

    CHECK_THROWS_WITH(build(plan(16, 3, no_catalog()), BigInt(1000)),
                      Catch::Matchers::ContainsSubstring("691891200"));
}

TEST_CASE("a custom root selection is honored and visible in the plan") {
    auto weak = std::make_shared<Selection>(*search_design(4, 2, 1, 6));
    PlanOptions opts;
    opts.root_selection = weak;
    auto p = plan(4, 3, opts);
    REQUIRE(p->kind == PlanKind::Combine);
    CHECK(p->sel_size == 2);
    CHECK(p->size == 8);
    CHECK(render_plan(p).find("custom") != std::string::npos);

    // a 1-design is too weak for a 3-wise output; the verifier says so
    auto fam = build(p);
    CHECK(fam.size() == 8);
    CHECK_FALSE(check_uniform(fam, 3).pass);

    PlanOptions bad;
    bad.root_selection = weak;
    CHECK_THROWS_AS(plan(8, 3, bad), std::invalid_argument);
}

TEST_CASE("k-group plan nodes build and verify") {
    auto node = plan_k_group(3, 2, 1, plan(2, 3), {plan(2, 1), plan(2, 1)});
    CHECK(node->size == 720);
    auto fam = build(node);
    CHECK(fam.size() == 720);
    CHECK(check_uniform(fam, 3).pass);
    CHECK(render_plan(node).find("combine_k k=3") != std::string::npos);
}

TEST_CASE("size table shows the asymmetric recursion beating the naive one") {
    auto rows = size_table(6, 4);
    bool found_6720 = false;
    for (const auto& row : rows) {
        CAPTURE(row.m, row.l);
        CHECK(row.improved <= row.naive);
        CHECK(row.improved <= row.bound);
        if (row.m == 3 && row.l == 2) {
            CHECK(row.improved == 6720);
            CHECK(row.naive == 40320);
            CHECK(row.bound == 43046721);
            found_6720 = true;
        }
        if (row.m == 2 && row.l == 2) {
            CHECK(row.improved == 24);
            CHECK(row.naive == 24);
            CHECK(row.bound == 6561);
        }
    }
    CHECK(found_6720);
}
