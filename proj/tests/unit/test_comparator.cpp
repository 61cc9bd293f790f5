#include <cmath>
#include <numeric>
#include <vector>

#include "doctest.h"
#include "playbook/compare.hpp"
#include "playbook/rng.hpp"

using namespace playbook;

namespace {

DiffEstimate est_of(double lo, double hi) {
    DiffEstimate e;
    e.hdi = {lo, hi, 0.95};
    return e;
}

const RopeInterval kRope{};  // [-0.015, +0.015]

}  // namespace

TEST_SUITE("comparator") {

TEST_CASE("the three decision scenarios plus undecided") {
    CHECK(decide(est_of(0.05, 0.12), kRope) == ComparisonOutcome::FirstBetter);
    CHECK(decide(est_of(-0.12, -0.05), kRope) == ComparisonOutcome::SecondBetter);
    CHECK(decide(est_of(-0.01, 0.01), kRope) == ComparisonOutcome::Equal);
    CHECK(decide(est_of(-0.10, 0.20), kRope) == ComparisonOutcome::Undecided);
}

TEST_CASE("containment in the ROPE wins over direction") {
    CHECK(decide(est_of(0.001, 0.01), kRope) == ComparisonOutcome::Equal);
    CHECK(decide(est_of(-0.01, -0.001), kRope) == ComparisonOutcome::Equal);
}

TEST_CASE("decide is antisymmetric under interval negation") {
    CounterRng rng(31);
    for (int trial = 0; trial < 200; ++trial) {
        const double a = rng.uniform() * 0.6 - 0.3;
        const double b = rng.uniform() * 0.6 - 0.3;
        const auto fwd = est_of(std::min(a, b), std::max(a, b));
        const auto rev = est_of(-std::max(a, b), -std::min(a, b));
        const auto f = decide(fwd, kRope);
        const auto r = decide(rev, kRope);
        switch (f) {
            case ComparisonOutcome::FirstBetter:
                CHECK(r == ComparisonOutcome::SecondBetter);
                break;
            case ComparisonOutcome::SecondBetter:
                CHECK(r == ComparisonOutcome::FirstBetter);
                break;
            default:
                CHECK(f == r);
                break;
        }
    }
}

TEST_CASE("widening the ROPE never turns equal into undecided") {
    CounterRng rng(32);
    const RopeInterval wide{-0.05, 0.05};
    for (int trial = 0; trial < 200; ++trial) {
        const double a = rng.uniform() * 0.2 - 0.1;
        const double b = rng.uniform() * 0.2 - 0.1;
        const auto e = est_of(std::min(a, b), std::max(a, b));
        if (decide(e, kRope) == ComparisonOutcome::Equal) {
            CHECK(decide(e, wide) == ComparisonOutcome::Equal);
        }
    }
}

TEST_CASE("a malformed ROPE is rejected") {
    CHECK_THROWS_AS(decide(est_of(0.0, 0.1), RopeInterval{0.01, 0.02}),
                    DomainError);
}

TEST_CASE("identical posteriors give a small symmetric difference interval") {
    const BetaPosterior p{5000.0, 5000.0};
    const auto est = difference_hdi(p, p, 0.95, DiffMethod::MonteCarlo, 200000, 42);
    // sd of the difference is sqrt(2 * var) ~ 0.00707, so 95% ~ +-0.0139
    CHECK(std::fabs(est.hdi.lo + 0.0139) <= 2e-3);
    CHECK(std::fabs(est.hdi.hi - 0.0139) <= 2e-3);
    CHECK(std::fabs(est.hdi.lo + est.hdi.hi) <= 2e-3);
}

TEST_CASE("well-separated posteriors leave zero far outside the interval") {
    const auto est = difference_hdi({800.0, 200.0}, {200.0, 800.0}, 0.95,
                                    DiffMethod::MonteCarlo, 200000, 7);
    CHECK(est.hdi.lo > 0.55);
    CHECK(est.hdi.hi < 0.65);
}

TEST_CASE("swapping the operands negates the interval") {
    const BetaPosterior p1{800.0, 400.0};
    const BetaPosterior p2{550.0, 600.0};
    const auto fwd = difference_hdi(p1, p2, 0.95, DiffMethod::MonteCarlo, 200000, 9);
    const auto rev = difference_hdi(p2, p1, 0.95, DiffMethod::MonteCarlo, 200000, 9);
    CHECK(std::fabs(fwd.hdi.lo + rev.hdi.hi) <= 2e-3);
    CHECK(std::fabs(fwd.hdi.hi + rev.hdi.lo) <= 2e-3);
}

TEST_CASE("monte carlo endpoints are stable as draws double") {
    const BetaPosterior p1{90.0, 210.0};
    const BetaPosterior p2{70.0, 230.0};
    std::vector<double> lows;
    for (std::uint64_t seed = 0; seed < 6; ++seed) {
        lows.push_back(
            difference_hdi(p1, p2, 0.95, DiffMethod::MonteCarlo, 20000, seed)
                .hdi.lo);
    }
    const double mean_lo =
        std::accumulate(lows.begin(), lows.end(), 0.0) / lows.size();
    double var = 0.0;
    for (double lo : lows) var += (lo - mean_lo) * (lo - mean_lo);
    const double sd = std::sqrt(var / (lows.size() - 1));
    const auto big =
        difference_hdi(p1, p2, 0.95, DiffMethod::MonteCarlo, 40000, 99);
    CHECK(std::fabs(big.hdi.lo - mean_lo) <= 3.0 * sd + 1e-4);
}

TEST_CASE("monte carlo requires ten thousand draws") {
    CHECK_THROWS_AS(difference_hdi({2, 2}, {2, 2}, 0.95, DiffMethod::MonteCarlo,
                                   9999, 0),
                    InsufficientDraws);
}

TEST_CASE("the grid method agrees with monte carlo on concentrated posteriors") {
    const BetaPosterior p{5000.0, 5000.0};
    const auto grid = difference_hdi(p, p, 0.95, DiffMethod::HdiGrid, 0, 0, 512);
    CHECK(std::fabs(grid.hdi.lo + grid.hdi.hi) <= 1e-3);
    const auto mc = difference_hdi(p, p, 0.95, DiffMethod::MonteCarlo, 200000, 3);
    CHECK(std::fabs(grid.hdi.lo - mc.hdi.lo) <= 3e-3);
    CHECK(std::fabs(grid.hdi.hi - mc.hdi.hi) <= 3e-3);

    const auto apart = difference_hdi({800.0, 200.0}, {200.0, 800.0}, 0.95,
                                      DiffMethod::HdiGrid, 0, 0, 512);
    CHECK(apart.hdi.lo > 0.55);
}

TEST_CASE("lower variance wins ties, then higher mean, then the first") {
    CHECK(tie_break({20.0, 20.0}, {2.0, 2.0}) == PairPick::First);
    CHECK(tie_break({2.0, 2.0}, {20.0, 20.0}) == PairPick::Second);
    CHECK(tie_break({2.0, 2.0}, {2.0, 2.0}) == PairPick::First);
    // equal variances by symmetry; 0.75 beats 0.25
    CHECK(tie_break({10.0, 30.0}, {30.0, 10.0}) == PairPick::Second);
}

TEST_CASE("ranking follows pairwise wins") {
    using O = ComparisonOutcome;
    const std::vector<BetaPosterior> ps{{30, 70}, {50, 50}, {70, 30}};
    // 2 beats everyone, 1 beats 0
    std::vector<std::vector<O>> outcomes{
        {O::Equal, O::SecondBetter, O::SecondBetter},
        {O::FirstBetter, O::Equal, O::SecondBetter},
        {O::FirstBetter, O::FirstBetter, O::Equal}};
    const auto r = rank(ps, outcomes);
    CHECK(r.order == std::vector<int>{2, 1, 0});
    CHECK(r.wins[2][0] == 1.0);
    CHECK(r.wins[0][2] == 0.0);
}

TEST_CASE("all-equal outcomes rank by concentration") {
    using O = ComparisonOutcome;
    const std::vector<BetaPosterior> ps{{2, 2}, {40, 40}, {10, 10}};
    std::vector<std::vector<O>> outcomes(3, std::vector<O>(3, O::Equal));
    const auto r = rank(ps, outcomes);
    CHECK(r.order == std::vector<int>{1, 2, 0});
}

TEST_CASE("tied wins fall back to the higher mean") {
    using O = ComparisonOutcome;
    const std::vector<BetaPosterior> ps{{30, 70}, {50, 50}};
    std::vector<std::vector<O>> outcomes(2, std::vector<O>(2, O::Undecided));
    const auto r = rank(ps, outcomes);
    CHECK(r.order == std::vector<int>{1, 0});
}

TEST_CASE("small rank-preserving perturbations keep the argmax") {
    using O = ComparisonOutcome;
    std::vector<BetaPosterior> ps{{20, 80}, {50, 50}, {35, 65}};
    std::vector<std::vector<O>> outcomes(3, std::vector<O>(3, O::Undecided));
    const int base = rank(ps, outcomes).order.front();
    for (auto& p : ps) p.alpha += 1e-6;
    CHECK(rank(ps, outcomes).order.front() == base);
}

TEST_CASE("comparison log lines are compact JSON") {
    auto e = est_of(-0.01, 0.02);
    CHECK(comparison_log_line(3, 0, 2, e, ComparisonOutcome::Undecided) ==
          "{\"round\":3,\"i\":0,\"j\":2,\"hdi_lo\":-0.01,\"hdi_hi\":0.02,"
          "\"outcome\":\"undecided\"}");
}

}  // TEST_SUITE
