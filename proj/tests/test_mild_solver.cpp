#include <catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "fracperiod/mild_solver.hpp"

using namespace fracperiod;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;
using std::numbers::pi;

namespace {

// E_{1/2,1}(-sqrt t) = e^t erfc(sqrt t)
double half_relaxation(double t) { return std::exp(t) * std::erfc(std::sqrt(t)); }

std::vector<cplx> constant(const TimeGrid& g, cplx c) { return std::vector<cplx>(g.size(), c); }

}  // namespace

TEST_CASE("scalar resolvent", "[solver]") {
    CHECK_THAT(scalar_resolvent_s(FracOrder(1.0), -1.0, 2.0).real(), WithinRel(0.1353352832366127, 1e-15));
    CHECK(scalar_resolvent_s(FracOrder(0.3), -5.0, 0.0) == cplx(1.0));
    CHECK(scalar_resolvent_s(FracOrder(0.7), 0.0, 3.0) == cplx(1.0));
    CHECK_THAT(scalar_resolvent_s(FracOrder(0.5), -1.0, 1.0).real(), WithinRel(0.42758357615580700, 1e-15));
    CHECK_THROWS_AS(scalar_resolvent_s(FracOrder(0.5), 1.0, 1.0), DomainError);
}

TEST_CASE("homogeneous relaxation", "[solver]") {
    const TimeGrid g(1e-3, 5000);
    const auto u = solve_mode(FracOrder(0.5), -1.0, 1.0, constant(g, 0.0), g);
    double worst = 0.0;
    for (std::size_t k = 0; k < g.size(); ++k) worst = std::max(worst, std::abs(u[k] - half_relaxation(g.t(k))));
    CHECK(worst <= 1e-6);
}

TEST_CASE("constant forcing", "[solver]") {
    const TimeGrid g(1e-3, 3000);
    for (double alpha : {0.3, 0.5, 2.0 / 3.0, 1.0}) {
        for (double a : {0.5, 1.0, 4.0}) {
            const auto u = solve_mode(FracOrder(alpha), -a, 0.0, constant(g, 1.0), g);
            double worst = 0.0;
            for (std::size_t k = 0; k < g.size(); ++k) {
                const double ref = (1.0 - mittag_leffler(MLParams{alpha, 1.0}, -a * std::pow(g.t(k), alpha))) / a;
                worst = std::max(worst, std::abs(u[k] - ref));
            }
            INFO("alpha=" << alpha << " a=" << a);
            CHECK(worst <= 1e-3);
        }
    }
}

TEST_CASE("classical limit", "[solver]") {
    // u' = -u + cos(2 pi t), u(0) = 0
    const TimeGrid g(1e-3, 4000);
    const double w = 2.0 * pi;
    std::vector<cplx> f(g.size());
    for (std::size_t k = 0; k < g.size(); ++k) f[k] = std::cos(w * g.t(k));
    const auto u = solve_mode(FracOrder(1.0), -1.0, 0.0, f, g);
    double worst = 0.0;
    for (std::size_t k = 0; k < g.size(); ++k) {
        const double t = g.t(k);
        const double ref = (std::cos(w * t) + w * std::sin(w * t) - std::exp(-t)) / (1.0 + w * w);
        worst = std::max(worst, std::abs(u[k] - ref));
    }
    CHECK(worst <= 1e-4);
}

TEST_CASE("complex eigenvalues are accepted", "[solver]") {
    const TimeGrid g(1e-3, 2000);
    const cplx mu(-1.0, 2.0);
    const auto u = solve_mode(FracOrder(1.0), mu, 1.0, constant(g, 0.0), g);
    for (std::size_t k = 0; k < g.size(); k += 100) CHECK(std::abs(u[k] - std::exp(mu * g.t(k))) <= 1e-12);
}

TEST_CASE("mild residual", "[solver]") {
    const TimeGrid g(1e-3, 2000);
    const auto op = DiagonalOperator::explicit_eigenvalues({-1.0});
    {
        const auto f = ForcingSpec::zero(1);
        const std::vector<cplx> x0{1.0};
        const auto traj = solve(FracOrder(0.5), op, x0, f, g);
        CHECK(mild_residual(FracOrder(0.5), op, traj, f.sample(g)) <= 5e-3);
    }
    {
        const auto f = ForcingSpec::uniform(1, {{0.0, 1.0}});
        const std::vector<cplx> x0{0.0};
        const auto traj = solve(FracOrder(1.0), op, x0, f, g);
        CHECK(mild_residual(FracOrder(1.0), op, traj, f.sample(g)) <= 1e-3);
    }
    {
        // stationary: u = x0, f = -A x0
        const auto op2 = DiagonalOperator::explicit_eigenvalues({-2.0, cplx(-1.0, 1.0)});
        const std::vector<cplx> x0{0.5, cplx(1.0, -1.0)};
        Trajectory traj{g, {constant(g, x0[0]), constant(g, x0[1])}, x0, op2.labels()};
        const SampledFunction f(g, {constant(g, 2.0 * x0[0]), constant(g, -op2.eigenvalues()[1] * x0[1])});
        CHECK(mild_residual(FracOrder(0.6), op2, traj, f) <= 1e-12);
    }
}

TEST_CASE("mild residual converges under refinement", "[solver]") {
    const auto op = DiagonalOperator::explicit_eigenvalues({-1.0});
    const auto f = ForcingSpec::zero(1);
    const std::vector<cplx> x0{1.0};
    double prev = 0.0;
    for (double dt : {4e-3, 2e-3, 1e-3}) {
        const auto g = TimeGrid::covering(2.0, dt);
        const double r = mild_residual(FracOrder(0.5), op, solve(FracOrder(0.5), op, x0, f, g), f.sample(g));
        if (prev > 0.0) CHECK(r <= 0.7 * prev);
        prev = r;
    }
}

TEST_CASE("solve is linear and mode independent", "[solver]") {
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    const TimeGrid g(0.01, 300);
    const auto op = DiagonalOperator::explicit_eigenvalues({-1.0, -3.5, cplx(-0.5, 2.0)});
    auto random_forcing = [&] {
        std::vector<std::vector<ForcingTerm>> terms(3);
        for (auto& m : terms)
            for (int j = 0; j < 2; ++j) m.push_back({4.0 * U(rng), {U(rng), U(rng)}});
        return terms;
    };
    const auto tf = random_forcing(), tg = random_forcing();
    std::vector<std::vector<ForcingTerm>> sum(3);
    for (int m = 0; m < 3; ++m) {
        sum[m] = tf[m];
        sum[m].insert(sum[m].end(), tg[m].begin(), tg[m].end());
    }
    std::vector<cplx> x(3), y(3), xy(3);
    for (int m = 0; m < 3; ++m) {
        x[m] = {U(rng), U(rng)};
        y[m] = {U(rng), U(rng)};
        xy[m] = x[m] + y[m];
    }
    const FracOrder al(0.45);
    const auto a = solve(al, op, x, ForcingSpec(tf), g);
    const auto b = solve(al, op, y, ForcingSpec(tg), g);
    const auto c = solve(al, op, xy, ForcingSpec(sum), g);
    for (int m = 0; m < 3; ++m)
        for (std::size_t k = 0; k < g.size(); ++k)
            CHECK(std::abs(c.modes[m][k] - (a.modes[m][k] + b.modes[m][k])) <= 1e-12);

    // permuting modes permutes the output bit for bit
    const auto op_perm = DiagonalOperator::explicit_eigenvalues({cplx(-0.5, 2.0), -1.0, -3.5});
    const std::vector<std::vector<ForcingTerm>> tf_perm{tf[2], tf[0], tf[1]};
    const std::vector<cplx> x_perm{x[2], x[0], x[1]};
    const auto p = solve(al, op_perm, x_perm, ForcingSpec(tf_perm), g);
    CHECK(p.modes[0] == a.modes[2]);
    CHECK(p.modes[1] == a.modes[0]);
    CHECK(p.modes[2] == a.modes[1]);

    // threads do not change anything
    const auto par = solve(al, op, x, ForcingSpec(tf), g, 3);
    for (int m = 0; m < 3; ++m) CHECK(par.modes[m] == a.modes[m]);

    // one mode is solve_mode
    const auto one = DiagonalOperator::explicit_eigenvalues({-1.0});
    const auto f1 = ForcingSpec(std::vector<std::vector<ForcingTerm>>{tf[0]});
    const std::vector<cplx> x1{x[0]};
    CHECK(solve(al, one, x1, f1, g).modes[0] == solve_mode(al, -1.0, x[0], f1.sample_mode(0, g), g));
}

TEST_CASE("dimension checks", "[solver]") {
    const TimeGrid g(0.01, 10);
    const auto op = DiagonalOperator::explicit_eigenvalues({-1.0, -2.0});
    const std::vector<cplx> x1{1.0};
    CHECK_THROWS_AS(solve(FracOrder(0.5), op, x1, ForcingSpec::zero(2), g), DimensionMismatch);
    const std::vector<cplx> x2{1.0, 0.0};
    CHECK_THROWS_AS(solve(FracOrder(0.5), op, x2, ForcingSpec::zero(3), g), DimensionMismatch);
    CHECK_THROWS_AS(solve_mode(FracOrder(0.5), -1.0, 0.0, std::vector<cplx>(3), g), DimensionMismatch);
    CHECK_THROWS(ForcingSpec({{}}, DecayTerm{{1.0}, -1.0}));
}

TEST_CASE("homogeneous decay", "[solver]") {
    const double a = std::pow(pi, 2.0 / 3.0);
    const auto op = DiagonalOperator::dirichlet_laplacian_1d(a, 4);
    const FracOrder al(2.0 / 3.0);
    const std::vector<cplx> x0{1.0, -0.5, cplx(0.0, 1.0), 2.0};
    const auto g = TimeGrid::covering(11.0, 1e-3);
    const auto traj = solve(al, op, x0, ForcingSpec::zero(4), g);
    double x_norm = 0.0;
    for (auto x : x0) x_norm += std::norm(x);
    x_norm = std::sqrt(x_norm);
    auto window_max = [&](double T) {
        double worst = 0.0;
        for (std::size_t k = static_cast<std::size_t>(std::lround(T / g.dt)); k <= static_cast<std::size_t>(std::lround((T + 1) / g.dt)); ++k)
            worst = std::max(worst, traj.norm_at(k));
        return worst;
    };
    double prev = std::numeric_limits<double>::infinity();
    for (int T = 1; T <= 9; ++T) {
        const double m = window_max(T);
        CHECK(m <= prev);
        prev = m;
    }
    const double t_tail = g.t_max() - 1.0;
    const double bound = 2.0 * mittag_leffler(MLParams{al.value(), 1.0}, -a * std::pow(t_tail, al.value())) * x_norm;
    CHECK(window_max(t_tail) <= bound);
}

TEST_CASE("convolution bound", "[solver]") {
    const auto g = TimeGrid::covering(20.0, 1e-3);
    CHECK(f_alpha_norm_check(FracOrder(0.5), 1.0, constant(g, 1.0), g));
    CHECK(f_alpha_norm_check(FracOrder(0.5), 1.0, constant(g, 0.0), g));
    std::vector<cplx> c(g.size());
    for (std::size_t k = 0; k < g.size(); ++k) c[k] = std::cos(2.0 * pi * g.t(k));
    CHECK(f_alpha_norm_check(FracOrder(2.0 / 3.0), 2.0, c, g));
    // F_alpha 1 increases toward 1/a
    const auto u = f_alpha(FracOrder(0.5), 1.0, constant(g, 1.0), g);
    for (std::size_t k = 1; k < g.size(); ++k) CHECK(u[k].real() >= u[k - 1].real());
    CHECK_THAT(u.back().real(), WithinAbs(1.0 - half_relaxation(20.0), 1e-9));
}
