#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "cascade/game.hpp"
#include "test_support.hpp"

using namespace cascade;
using Catch::Approx;

TEST_CASE("identity chain puts all mass on the diagonal") {
    std::vector<double> prior{0.5, 0.5};
    Kernel id = Kernel::identity(2);
    JointDistribution j = build_joint(prior, id, id, id);
    CHECK(j.at(0, 0, 0, 0) == Approx(0.5));
    CHECK(j.at(1, 1, 1, 1) == Approx(0.5));
    CHECK(j.total() == Approx(1.0));
    double off = 0.0;
    for (std::size_t u = 0; u < 2; ++u)
        for (std::size_t a = 0; a < 2; ++a)
            for (std::size_t b = 0; b < 2; ++b)
                for (std::size_t v = 0; v < 2; ++v)
                    if (!(u == a && a == b && b == v)) off += j.at(u, a, b, v);
    CHECK(off == Approx(0.0).margin(1e-15));
}

TEST_CASE("constant decoder collapses the (U,V) marginal") {
    std::vector<double> prior{0.6, 0.4};
    Kernel id = Kernel::identity(2);
    Kernel to_v1 = Kernel::constant_to(2, 2, 1);
    JointDistribution j = build_joint(prior, id, id, to_v1);
    Matrix uv = j.marginal_uv();
    CHECK(uv(0, 0) == Approx(0.0).margin(1e-15));
    CHECK(uv(0, 1) == Approx(0.6));
    CHECK(uv(1, 0) == Approx(0.0).margin(1e-15));
    CHECK(uv(1, 1) == Approx(0.4));
}

TEST_CASE("noisy first hop with identities downstream") {
    std::vector<double> prior{0.6, 0.4};
    Kernel k1 = Kernel::from_rows({{0.7, 0.3}, {0.4, 0.6}});
    Kernel id = Kernel::identity(2);
    JointDistribution j = build_joint(prior, k1, id, id);
    Matrix uv = j.marginal_uv();
    CHECK(uv(1, 1) == Approx(0.24));
    auto mu = j.marginal_u();
    CHECK(mu[0] == Approx(0.6).margin(1e-12));
    CHECK(mu[1] == Approx(0.4).margin(1e-12));
}

TEST_CASE("build_joint rejects mismatched shapes") {
    std::vector<double> prior{0.5, 0.5};
    Kernel k1 = Kernel::identity(2);
    Kernel k3 = Kernel::identity(3);
    CHECK_THROWS_AS(build_joint(prior, k1, k1, k3), std::invalid_argument);
    CHECK_THROWS_AS(build_joint({0.5, 0.5, 0.0}, k1, k1, k1), std::invalid_argument);
}

TEST_CASE("expected cost on reference tables") {
    GameSpec spec = test_support::binary_example();
    Kernel id = Kernel::identity(2);
    SECTION("identity chain") {
        JointDistribution j = build_joint(spec.prior, id, id, id);
        CHECK(expected_cost(j, spec.cost1) == Approx(9.4));
    }
    SECTION("decoder constant to v1") {
        JointDistribution j = build_joint(spec.prior, id, id, Kernel::constant_to(2, 2, 1));
        CHECK(expected_cost(j, spec.cost1) == Approx(4.0));
    }
    SECTION("zero cost matrix") {
        JointDistribution j = build_joint(spec.prior, id, id, id);
        Matrix zero(2, 2);
        CHECK(expected_cost(j, zero) == Approx(0.0).margin(1e-15));
    }
}

TEST_CASE("random chains: normalization, marginal, Markov residuals") {
    std::mt19937 rng(12345);
    for (int trial = 0; trial < 50; ++trial) {
        auto prior = test_support::random_prob_vector(rng, 2 + trial % 3);
        Kernel k1 = test_support::random_kernel(rng, prior.size(), 2 + (trial / 2) % 3);
        Kernel k2 = test_support::random_kernel(rng, k1.cols, 2 + (trial / 3) % 3);
        Kernel k3 = test_support::random_kernel(rng, k2.cols, 2);
        JointDistribution j = build_joint(prior, k1, k2, k3);
        REQUIRE(std::abs(j.total() - 1.0) < 1e-10);
        auto mu = j.marginal_u();
        for (std::size_t u = 0; u < prior.size(); ++u) REQUIRE(std::abs(mu[u] - prior[u]) < 1e-12);
        REQUIRE(j.markov_residual() < 1e-9);
    }
}

TEST_CASE("expected cost is affine in kernel mixtures") {
    std::mt19937 rng(777);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (int trial = 0; trial < 20; ++trial) {
        auto prior = test_support::random_prob_vector(rng, 2);
        Kernel a = test_support::random_kernel(rng, 2, 2);
        Kernel b = test_support::random_kernel(rng, 2, 2);
        Kernel k2 = test_support::random_kernel(rng, 2, 2);
        Kernel k3 = test_support::random_kernel(rng, 2, 2);
        Matrix cost = test_support::random_cost(rng, 2, 2, 10.0);
        double lam = unif(rng);
        Kernel mix(2, 2);
        for (std::size_t i = 0; i < 4; ++i) mix.p[i] = lam * a.p[i] + (1.0 - lam) * b.p[i];
        double va = expected_cost(build_joint(prior, a, k2, k3), cost);
        double vb = expected_cost(build_joint(prior, b, k2, k3), cost);
        double vm = expected_cost(build_joint(prior, mix, k2, k3), cost);
        REQUIRE(vm == Approx(lam * va + (1.0 - lam) * vb).margin(1e-9));
    }
}
