#include "concord/errors.hpp"
#include "concord/estimation.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace concord;

TEST_CASE("merged moments equal a two-pass computation") {
    std::mt19937_64 rng(3);
    std::lognormal_distribution<double> draw(0.0, 0.8);
    std::vector<double> xs(20001);
    for (auto& x : xs) x = draw(rng) + 100.0;

    double mean = 0.0;
    for (double x : xs) mean += x;
    mean /= static_cast<double>(xs.size());
    double m2 = 0.0;
    double m4 = 0.0;
    for (double x : xs) {
        m2 += (x - mean) * (x - mean);
        m4 += std::pow(x - mean, 4);
    }
    m2 /= static_cast<double>(xs.size());
    m4 /= static_cast<double>(xs.size());

    Moments a;
    Moments b;
    Moments c;
    Moments whole;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        (i < 5000 ? a : i < 12345 ? b : c).push(xs[i]);
        whole.push(xs[i]);
    }
    a.merge(b);
    a.merge(c);
    for (const Moments* m : {&a, &whole}) {
        CHECK(m->count() == xs.size());
        CHECK(m->mean() == doctest::Approx(mean).epsilon(1e-14));
        CHECK(m->central2() == doctest::Approx(m2).epsilon(1e-12));
        CHECK(m->central4() == doctest::Approx(m4).epsilon(1e-10));
    }
    Moments empty;
    a.merge(empty);
    CHECK(a.count() == xs.size());
    empty.merge(whole);
    CHECK(empty.mean() == whole.mean());
}

TEST_CASE("canonical estimator on deterministic copulas") {
    const auto bern = make_bernoulli();
    auto r = estimate_kappa(bern, sample(comonotone(), 1000, 1), 1);
    CHECK(r.estimate == 1.0);
    CHECK(r.sigma2_hat == 0.0);
    CHECK(r.estimator_id == "kappa:bernoulli");
    CHECK(r.seed == 1);
    r = estimate_kappa(bern, sample(countermonotone(), 1000, 1));
    CHECK(r.estimate == -1.0);

    const auto t = sample(comonotone(), 500, 2);
    CHECK(estimate_tau(std::span<const UV>(t.data(), 250), std::span<const UV>(t.data() + 250, 250)).estimate == 1.0);
    CHECK(estimate_tau_overlap(t).estimate == 1.0);
}

TEST_CASE("estimate on independence is centred at zero with unit variance") {
    const auto g = make_normal();
    const auto r = estimate_kappa(g, sample(independence(), 100000, 8));
    CHECK(std::abs(r.estimate) <= 3.0 * std::sqrt(1.0 / 100000));
    CHECK(std::abs(r.sigma2_hat - 1.0) <= 3.0 * r.se_sigma2);
}

TEST_CASE("shifted estimator differs from the unshifted one by mu times the score mean") {
    const auto pairs = sample(clayton(3.0), 20000, 4);
    for (const auto& g : {make_uniform(), make_normal(), make_symmetric_beta(0.5)}) {
        double sum_mean = 0.0;
        for (const auto& p : pairs) sum_mean += g.quantile(p.u) + g.quantile(p.v);
        sum_mean /= static_cast<double>(pairs.size());
        for (double mu : {-0.7, 0.2, 1.5}) {
            const auto base = estimate_kappa(g, pairs);
            const auto moved = estimate_kappa(shifted(g, mu), pairs);
            CHECK(moved.estimate - base.estimate == doctest::Approx(mu * sum_mean).epsilon(1e-10));
        }
    }
    // exact agreement when the scores cancel pairwise
    const auto w = sample(countermonotone(), 20000, 5);
    for (const auto& g : {make_uniform(), make_normal()}) {
        CHECK(std::abs(estimate_kappa(shifted(g, 0.8), w).estimate - estimate_kappa(g, w).estimate) <= 1e-10);
    }
}

TEST_CASE("score-based estimator agrees with the pair-based one") {
    const auto g = make_student_t(10.0);
    const auto pairs = sample(gaussian(0.4), 1000, 6);
    std::vector<double> x;
    std::vector<double> y;
    for (const auto& p : pairs) {
        x.push_back(g.quantile(p.u));
        y.push_back(g.quantile(p.v));
    }
    const auto a = estimate_kappa(g, pairs);
    const auto b = estimate_kappa_from_scores(x, y, 0.0, 0, "kappa");
    CHECK(a.estimate == b.estimate);
    CHECK(a.sigma2_hat == b.sigma2_hat);
}

TEST_CASE("ties count as discordant") {
    CHECK(kendall_sign(0.3, 0.3) == -1.0);
    CHECK(kendall_sign(0.4, 0.3) == 1.0);
    CHECK(kendall_sign(0.2, 0.3) == -1.0);
}

TEST_CASE("overlapping tau floors a negative variance and flags it") {
    // u strictly increasing, v zig-zag: the sign products alternate
    const std::vector<double> v = {0.5, 0.6, 0.4, 0.7, 0.3, 0.8, 0.2, 0.9, 0.1};
    std::vector<UV> pairs;
    for (std::size_t i = 0; i < v.size(); ++i) pairs.push_back({0.05 + 0.1 * double(i), v[i]});
    const auto r = estimate_tau_overlap(pairs);
    CHECK(r.n == v.size() - 1);
    CHECK(r.variance_floored);
    CHECK(r.sigma2_hat == 0.0);

    const auto big = estimate_tau_overlap(sample(clayton(2.0), 20001, 9));
    CHECK_FALSE(big.variance_floored);
    CHECK(big.estimate == doctest::Approx(0.5).epsilon(0.05));
}

TEST_CASE("plug-in optimal shift") {
    const auto pairs = sample(clayton(5.0), 50000, 10);
    const auto g = make_uniform();
    const auto e = estimate_optimal_shift_detailed(g, pairs);
    CHECK(e.se > 0.0);
    // the shifted sample variance is a parabola in mu; its vertex is mu_hat
    const auto variance_at = [&](double mu) { return estimate_kappa(shifted(g, mu), pairs).sigma2_hat; };
    CHECK(variance_at(e.mu) <= variance_at(e.mu + 1e-3));
    CHECK(variance_at(e.mu) <= variance_at(e.mu - 1e-3));
    CHECK(estimate_optimal_shift(g, pairs) == e.mu);

    // X + Y vanishes under W with a symmetric law
    CHECK(estimate_optimal_shift(make_bernoulli(), sample(countermonotone(), 1000, 1)) == 0.0);
}

TEST_CASE("confidence intervals") {
    EstimationResult r;
    r.estimate = 0.3;
    r.sigma2_hat = 0.81;
    r.n = 10000;
    const auto [lo, hi] = confidence_interval(r, 0.95);
    CHECK(lo == doctest::Approx(0.3 - 1.959963984540054 * 0.009));
    CHECK(hi == doctest::Approx(0.3 + 1.959963984540054 * 0.009));
    r.sigma2_hat = 0.0;
    CHECK(confidence_interval(r, 0.95).first == 0.3);
    CHECK_THROWS_AS(confidence_interval(r, 1.0), ContractError);
}

TEST_CASE("contract violations") {
    const auto g = make_normal();
    const std::vector<UV> edge = {{0.0, 0.5}, {0.3, 0.4}};
    CHECK_THROWS_AS(estimate_kappa(g, edge), ContractError);
    const std::vector<UV> one = {{0.2, 0.5}};
    CHECK_THROWS_AS(estimate_kappa(g, one), ContractError);
    const auto s = sample(independence(), 10, 1);
    CHECK_THROWS_AS(estimate_tau(std::span<const UV>(s.data(), 4), std::span<const UV>(s.data() + 4, 5)),
                    ContractError);
    CHECK_THROWS_AS(estimate_optimal_shift(shifted(g, 0.1), s), ContractError);
    const std::vector<double> a = {1.0, 2.0};
    const std::vector<double> b = {1.0};
    CHECK_THROWS_AS(estimate_kappa_from_scores(a, b, 0.0, 0, "x"), ContractError);
}
