#include <catch2/catch_amalgamated.hpp>

#include "cfl/bounds.hpp"
#include "cfl/metrics.hpp"
#include "cfl/sweep.hpp"

using namespace cfl;

namespace {

Trajectory make_traj(const std::vector<double>& times, const std::vector<Vec>& states) {
  Trajectory t;
  t.times = times;
  t.states = states;
  return t;
}

// Exact scalar pair (lifted, nonlinear) on a grid, via the closed forms.
std::pair<Trajectory, Trajectory> scalar_closed_pair(Complex a, Complex x0, int N,
                                                     const std::vector<double>& grid) {
  Trajectory v, x;
  v.times = x.times = grid;
  auto xs = closed_form_x_samples(a, x0, grid);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    v.states.push_back(closed_form_v(a, x0, N, grid[i]));
    x.states.push_back(Vec::Constant(1, xs[i]));
  }
  return {std::move(v), std::move(x)};
}

}  // namespace

TEST_CASE("multiplicative error vanishes on exact lifts") {
  const auto grid = uniform_grid(1.0, 8);
  Trajectory x, v;
  x.times = v.times = grid;
  for (double t : grid) {
    Vec xs(2);
    xs[0] = Complex(0.3 * t, 0.1);
    xs[1] = Complex(-0.2 * t, 0.4);
    x.states.push_back(xs);
    Vec vs(2);
    vs[0] = std::exp(kI * xs[0]);
    vs[1] = std::exp(kI * xs[1]);
    v.states.push_back(vs);
  }
  for (double e : mult_error(v, x, LiftLayout::direct(2))) CHECK(e < 1e-15);
}

TEST_CASE("exact scalar error identity") {
  const auto grid = uniform_grid(1.0, 64);
  for (const Complex a : {Complex(1.0), kI, -kI}) {
    for (const Complex x0 : {Complex(0.3), Complex(-0.5, 0.5), Complex(1.0, 2.0)}) {
      for (int N : {1, 3, 7}) {
        auto [v, x] = scalar_closed_pair(a, x0, N, grid);
        auto errs = mult_error(v, x, LiftLayout::direct(1));
        for (std::size_t i = 0; i < grid.size(); ++i) {
          const double expect =
              std::pow(std::abs(std::exp(kI * x0) * (std::exp(kI * a * grid[i]) - 1.0)), N);
          CHECK(std::abs(errs[i] - expect) <= 1e-12 * std::max(1.0, expect));
        }
      }
    }
  }
}

TEST_CASE("grid mismatch is rejected") {
  Trajectory a = make_traj({0.0, 1.0}, {Vec::Zero(1), Vec::Zero(1)});
  Trajectory b = make_traj({0.0, 2.0}, {Vec::Zero(1), Vec::Zero(1)});
  CHECK_THROWS_AS(mult_error(a, b, LiftLayout::direct(1)), error);
}

TEST_CASE("extended layout at a lifted equilibrium") {
  auto ext = extend_two_sided(kuramoto_pairfield(0.0, 0.0, -1.0));
  const auto grid = uniform_grid(0.5, 64);
  Vec theta0 = Vec::Zero(2);
  auto x_traj = integrate_nonlinear(*&ext.sys, ext.initial_state(theta0), grid);
  // Base trajectory for the layout: the reduced 2-oscillator state.
  auto base = integrate_nonlinear(kuramoto_pairfield(0.0, 0.0, -1.0), theta0, grid);
  auto lift = multifreq_finite_section(ext, theta0, 8);
  auto v_traj = integrate_linear(lift, grid);
  REQUIRE(v_traj.status == SolveStatus::completed);
  for (double e : mult_error(v_traj, base, LiftLayout::of(ext))) CHECK(e <= 1e-10);
  (void)x_traj;
}

TEST_CASE("phase unwrapping follows a winding exponential") {
  const Complex x0(0.7, -0.2);
  const Complex c(5.0, 0.3);  // several full turns over the grid
  const auto grid = uniform_grid(4.0, 512);
  Trajectory v;
  v.times = grid;
  for (double t : grid) v.states.push_back(Vec::Constant(1, std::exp(kI * (x0 + c * t))));
  auto track = phase_unwrap(v, Vec::Constant(1, x0));
  CHECK(track.xi.front()[0] == x0);
  for (std::size_t i = 0; i < grid.size(); ++i)
    CHECK(std::abs(track.xi[i][0] - (x0 + c * grid[i])) < 1e-12);
}

TEST_CASE("phase unwrapping error cases") {
  Trajectory z = make_traj({0.0, 0.1}, {Vec::Constant(1, Complex(1.0)), Vec::Zero(1)});
  CHECK_THROWS_AS(phase_unwrap(z, Vec::Zero(1)), error);

  Trajectory u = make_traj({0.0, 0.1},
                           {Vec::Constant(1, Complex(1.0)), Vec::Constant(1, Complex(-1.0))});
  try {
    phase_unwrap(u, Vec::Zero(1));
    FAIL("expected undersampled");
  } catch (const error& e) {
    CHECK(e.kind() == "undersampled");
  }
}

TEST_CASE("reconstructed phases sit within 4x the multiplicative error") {
  const Complex a = 1.0, x0 = Complex(0.5, 2.0);
  auto rep = fourier_shortrange_bounds(1.0, 1.0, Vec::Constant(1, x0));
  REQUIRE(rep.admissible);
  const double Tt = rep.horizon / 2.0;
  const int N = order_for_tolerance(rep, Tt);
  std::vector<double> grid(129);
  for (int i = 0; i <= 128; ++i) grid[i] = Tt * i / 128.0;
  auto [v, x] = scalar_closed_pair(a, x0, N, grid);
  auto errs = mult_error(v, x, LiftLayout::direct(1));
  const double sup_err = *std::max_element(errs.begin(), errs.end());
  REQUIRE(sup_err <= 0.5);
  auto track = phase_unwrap(v, Vec::Constant(1, x0));
  double sup_phase = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i)
    sup_phase = std::max(sup_phase, std::abs(track.xi[i][0] - x.states[i][0]));
  CHECK(sup_phase <= 4.0 * sup_err);
}

TEST_CASE("frequency-averaged phases recover the base state") {
  auto ext = extend_two_sided(kuramoto_pairfield(0.0, 1.0, -1.0));
  Vec theta0(2);
  theta0[0] = 0.4;
  theta0[1] = -0.3;
  const auto grid = uniform_grid(0.4, 256);
  auto traj = integrate_nonlinear(ext.sys, ext.initial_state(theta0), grid);
  REQUIRE(traj.status == SolveStatus::completed);
  // Exact lifted trajectory: exponentials of the extended oracle state.
  Trajectory v;
  v.times = grid;
  for (const Vec& xt : traj.states) {
    Vec w(4);
    for (int j = 0; j < 4; ++j) w[j] = std::exp(kI * xt[j]);
    v.states.push_back(w);
  }
  auto track = phase_unwrap(v, ext.initial_state(theta0));
  auto avg = phase_average(track, LiftLayout::of(ext));
  auto base = integrate_nonlinear(kuramoto_pairfield(0.0, 1.0, -1.0), theta0, grid);
  for (std::size_t i = 0; i < grid.size(); ++i)
    for (int jp = 0; jp < 2; ++jp)
      CHECK(std::abs(avg.xi[i][jp] - base.states[i][jp]) < 1e-8);

  CHECK_THROWS_AS(phase_average(track, LiftLayout::direct(4)), error);
}

TEST_CASE("sup-log clamping") {
  CHECK(sup_log_error({1e-9, 1e-7, 1e-6}) == Catch::Approx(-4.0));
  CHECK(sup_log_error({0.5, 100.0, 2.0}) == Catch::Approx(1.0));  // clamp_hi = 10
  CHECK(sup_log_error({1e-3, 1e-2}) == Catch::Approx(-2.0).epsilon(1e-14));
  CHECK_THROWS_AS(sup_log_error({1.0}, 2.0, 1.0), error);
}

TEST_CASE("sup-log of the scalar error matches its closed form") {
  // log10 err(t) = N (-Im x0 log10 e + 1/2 log10 h(phi, t)) pointwise.
  const double phi = 0.3, im = 0.5;
  const int N = 6;
  const Complex a = std::exp(kI * phi), x0 = Complex(0.2, im);
  const auto grid = uniform_grid(0.5, 256);
  auto [v, x] = scalar_closed_pair(a, x0, N, grid);
  auto errs = mult_error(v, x, LiftLayout::direct(1));
  double sup_h = 0.0;
  for (double t : grid) sup_h = std::max(sup_h, h_profile(phi, t));
  const double expect = N * (-im * std::log10(bc::e) + 0.5 * std::log10(sup_h));
  REQUIRE(expect > -4.0);
  REQUIRE(expect < 1.0);
  CHECK(sup_log_error(errs) == Catch::Approx(expect).epsilon(1e-9));

  // phi = 0, T = pi/3, Im x0 = 0: sup h = 1 so the sup-log error is 0.
  std::vector<double> g2(65);
  for (int i = 0; i <= 64; ++i) g2[i] = M_PI / 3.0 * i / 64.0;
  auto [v2, x2] = scalar_closed_pair(1.0, 0.3, 10, g2);
  CHECK(sup_log_error(mult_error(v2, x2, LiftLayout::direct(1))) ==
        Catch::Approx(0.0).margin(1e-9));
}

TEST_CASE("measured errors never exceed the admissible bounds") {
  SolveConfig cfg;
  cfg.rel_tol = 1e-12;
  cfg.abs_tol = 1e-14;

  // Short-range exponential scheme, scalar a = 1, x0 = 0.5 + 2i, R* = 1.
  {
    const Complex a = 1.0, x0 = Complex(0.5, 2.0);
    auto rep = fourier_shortrange_bounds(1.0, 1.0, Vec::Constant(1, x0));
    REQUIRE(rep.admissible);
    std::vector<double> grid(33);
    for (int i = 0; i <= 32; ++i) grid[i] = rep.horizon * i / 32.0;
    auto x_traj = integrate_nonlinear(scalar_example(a, 1.0), Vec::Constant(1, x0), grid, cfg);
    for (int N = 2; N <= 8; ++N) {
      auto lift = fourier_finite_section(scalar_example(a, 1.0), Vec::Constant(1, x0), N);
      auto v_traj = integrate_linear(lift, grid, cfg);
      auto errs = mult_error(v_traj, x_traj, LiftLayout::direct(1));
      for (std::size_t i = 0; i < grid.size(); ++i)
        CHECK(errs[i] <= rep.bound(N, grid[i]));
    }
  }

  // Whole-range scheme, absolute error form.
  {
    const Complex a = kI, x0 = Complex(0.0, 1.5);
    auto rep = fourier_wholerange_bounds(10.0, 10.0, 1.0, Vec::Constant(1, x0));
    REQUIRE(rep.admissible);
    const auto grid = uniform_grid(10.0, 64);
    auto x_traj = integrate_nonlinear(scalar_example(a, 1.0), Vec::Constant(1, x0), grid, cfg);
    for (int N = 2; N <= 8; ++N) {
      auto lift = fourier_finite_section(scalar_example(a, 1.0), Vec::Constant(1, x0), N);
      auto v_traj = integrate_linear(lift, grid, cfg);
      auto errs = abs_error(v_traj, x_traj, LiftLayout::direct(1));
      for (std::size_t i = 0; i < grid.size(); ++i)
        CHECK(errs[i] <= rep.bound(N, grid[i]));
    }
  }
}

TEST_CASE("short-range envelope of the lifted exponential") {
  // ||exp(i x(t))||_inf <= ||exp(i x0)||_inf^{(e-1)/(2e-1)} (R/e)^{e/(2e-1)}
  // on [0, T*] for admissible scalar configurations.
  const double R = 1.0, D0 = 1.0;
  const Complex a = std::exp(kI * 0.4), x0 = Complex(0.3, 1.8);
  auto rep = fourier_shortrange_bounds(D0, R, Vec::Constant(1, x0));
  REQUIRE(rep.admissible);
  const double cap = std::pow(rep.w0_inf, bc::ratio) *
                     std::pow(R / bc::e, bc::e / (2.0 * bc::e - 1.0));
  std::vector<double> grid(257);
  for (int i = 0; i <= 256; ++i) grid[i] = rep.horizon * i / 256.0;
  auto xs = closed_form_x_samples(a, x0, grid);
  for (Complex x : xs) CHECK(std::abs(std::exp(kI * x)) <= cap * (1.0 + 1e-12));
}

TEST_CASE("whole-range contraction of the lifted norm") {
  // u(t) <= u(0) exp(-(mu0 - D0 u(0)/(R - u(0))) t) along admissible runs.
  const Complex a = kI, x0 = Complex(0.0, 1.5);
  const double D0 = 10.0, R = 10.0, mu0 = 1.0;
  auto rep = fourier_wholerange_bounds(D0, R, mu0, Vec::Constant(1, x0));
  REQUIRE(rep.admissible);
  const double u0 = rep.w0_l2;
  const double rate = mu0 - D0 * u0 / (R - u0);
  const auto grid = uniform_grid(30.0, 256);
  auto xs = closed_form_x_samples(a, x0, grid);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double u = std::abs(std::exp(kI * xs[i]));
    CHECK(u <= u0 * std::exp(-rate * grid[i]) * (1.0 + 1e-6));
  }
}

TEST_CASE("sweep: determinism, failure flags and validation") {
  SweepJob job;
  job.family = "scalar";
  job.a = kI;
  job.scheme = Scheme::fourier;
  job.order = 6;
  job.t_end = 0.4;
  job.samples = 64;
  job.x0 = Vec::Zero(1);
  job.axis1 = {"re_x0", -0.5, 0.5, 3};
  job.axis2 = {"im_x0", 0.0, 1.0, 3};
  job.jobs = 2;
  auto s1 = run_sweep(job);
  auto s2 = run_sweep(job);
  CHECK(s1.values == s2.values);
  for (auto f : s1.failed) CHECK(f == 0);

  SweepJob bad = job;
  bad.axis1.count = 1;
  CHECK_THROWS_AS(run_sweep(bad), error);
}

TEST_CASE("sweep surface is invariant under the lattice translation") {
  SweepJob job;
  job.family = "kuramoto3";
  job.omega = {0.0, 0.0, 0.0};
  job.K = -3.0;
  job.scheme = Scheme::fourier;
  job.order = 6;
  job.t_end = 0.3;
  job.samples = 64;
  job.x0 = Vec::Zero(3);
  job.axis1 = {"theta1_0", -2.0 * M_PI / 3.0, 2.0 * M_PI / 3.0, 5};
  job.axis2 = {"theta2_0", -2.0 * M_PI / 3.0, 2.0 * M_PI / 3.0, 5};
  job.jobs = 2;
  auto surf = run_sweep(job);
  // Spacing pi/3: the (2pi/3, 2pi/3) lattice vector is 2 cells diagonally.
  for (int i = 0; i + 2 < 5; ++i)
    for (int j = 0; j + 2 < 5; ++j)
      CHECK(std::abs(surf.values(i, j) - surf.values(i + 2, j + 2)) < 1e-6);
  // Equilibrium start at the center: clamped at the floor.
  CHECK(surf.values(2, 2) == Catch::Approx(-4.0));
}

TEST_CASE("scheme comparison rows") {
  CompareJob job;
  job.a = kI;
  job.x0_list = {Complex(0.0), Complex(0.0, 1.0), Complex(0.0, 2.0)};
  job.order = 3;
  job.t_end = 0.5;
  job.samples = 128;
  auto rows = run_compare(job);
  REQUIRE(rows.size() == 3);
  for (const auto& r : rows) {
    CHECK_FALSE(r.fourier_failed);
    CHECK_FALSE(r.carleman_failed);
  }
  // Larger Im x0 improves the exponential lifting...
  CHECK(rows[2].e_fourier < rows[1].e_fourier);
  CHECK(rows[1].e_fourier < rows[0].e_fourier);
  // ...and dominates the monomial lifting far from the origin.
  CHECK(rows[2].e_fourier <= rows[2].e_carleman);
}

TEST_CASE("frequency-averaged phase error sits under its bound") {
  auto base = kuramoto_pairfield(0.0, 1.0, -1.0);
  auto ext = extend_two_sided(base);
  const double R = bc::e + 0.5;
  const double D1 = ext.sys.decay_certificate(R).D;
  Vec theta0(2);
  theta0[0] = 0.2;
  theta0[1] = -0.1;
  auto rep = multifreq_bounds(D1, R, ext.omegas, theta0);
  REQUIRE(rep.admissible);
  const double Tt = rep.horizon / 2.0;
  const int N = order_for_tolerance(rep, Tt);
  std::vector<double> grid(513);
  for (int i = 0; i <= 512; ++i) grid[i] = Tt * i / 512.0;
  SolveConfig cfg;
  cfg.rel_tol = 1e-12;
  cfg.abs_tol = 1e-14;
  auto v_traj = integrate_linear(multifreq_finite_section(ext, theta0, N), grid, cfg);
  auto x_traj = integrate_nonlinear(base, theta0, grid, cfg);
  REQUIRE(v_traj.status == SolveStatus::completed);
  auto track = phase_unwrap(v_traj, ext.initial_state(theta0));
  auto avg = phase_average(track, LiftLayout::of(ext));
  const double bound = phase_average_bound(ext.omegas, D1, rep.horizon, Tt, N);
  // Hand evaluation of the prefactor: 2/(pi e (e-1) min|omega|).
  CHECK(phase_average_bound({Complex(1.0)}, 1.0, 1.0, 1.0, 1) ==
        Catch::Approx(2.0 / (M_PI * bc::e * (bc::e - 1.0))).epsilon(1e-14));
  for (std::size_t i = 0; i < grid.size(); ++i)
    for (int jp = 0; jp < 2; ++jp)
      CHECK(std::abs(avg.xi[i][jp] - x_traj.states[i][jp]) <= bound);
}

TEST_CASE("adaptive continuation refines an undersampled track") {
  // Phase step exactly pi at the initial sampling trips the guard; one
  // refinement halves it into the valid range.
  const double c = 4.0 * M_PI;
  int calls = 0;
  auto build = [&](int samples) {
    ++calls;
    Trajectory v;
    v.times = uniform_grid(4.0, samples);
    for (double t : v.times) v.states.push_back(Vec::Constant(1, std::exp(kI * c * t)));
    return v;
  };
  auto track = phase_unwrap_adaptive(build, Vec::Zero(1), 16, 8192);
  CHECK(calls == 2);
  for (std::size_t i = 0; i < track.times.size(); ++i)
    CHECK(std::abs(track.xi[i][0] - c * track.times[i]) < 1e-9);

  // A track that stays pi-stepped at every sampling exhausts the cap.
  auto stuck = [&](int) {
    Trajectory v;
    v.times = {0.0, 1.0, 2.0};
    v.states = {Vec::Constant(1, Complex(1.0)), Vec::Constant(1, Complex(-1.0)),
                Vec::Constant(1, Complex(1.0))};
    return v;
  };
  CHECK_THROWS_AS(phase_unwrap_adaptive(stuck, Vec::Zero(1), 16, 64), error);
}
