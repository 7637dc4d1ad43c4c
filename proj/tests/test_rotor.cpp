#include <catch2/catch.hpp>

#include "helpers.hpp"

using namespace liesplit;
using test_support::bench_params;

TEST_CASE("rotor system construction") {
  const rotor::RotorParams p = bench_params();
  const LinearSystem sys = rotor::build(p);

  SECTION("matrix and forcing carry the printed coefficients") {
    const Matrix& A = sys.A.constant_coeff();
    const Matrix expect{{0, 0, 1, 0}, {0, 0, 0, 1}, {-1, 0, 0, 0}, {0, -1, 0, 0}};
    CHECK(max_abs_diff(A, expect) == 0.0);
    CHECK(sys.A.order() == 0);
    REQUIRE(sys.f.order() == 1);
    CHECK(max_abs(sys.f.constant_coeff()) == 0.0);
    CHECK(sys.f.cos_coeff(1)[2] == Approx(-0.10404).margin(1e-15));
    CHECK(sys.f.cos_coeff(1)[0] == 0.0);
    CHECK(sys.f.sin_coeff(1)[3] == Approx(0.10404).margin(1e-15));
    CHECK(sys.algebra == MatrixAlgebra::symplectic);
    CHECK(sys.omega() == 1.02);
  }

  SECTION("the matrix part is Hamiltonian") {
    CHECK(hamiltonian_defect(sys.A.constant_coeff(), SymplecticForm(4)) == 0.0);
  }

  SECTION("zero unbalance removes the forcing") {
    rotor::RotorParams q = p;
    q.eps = 0.0;
    CHECK(rotor::build(q).f.is_zero());
  }

  SECTION("parameter guards") {
    rotor::RotorParams bad = p;
    bad.m = 0.0;
    CHECK_THROWS_AS(rotor::build(bad), invalid_input);
    bad = p;
    bad.k = -1.0;
    CHECK_THROWS_AS(rotor::build(bad), invalid_input);
    bad = p;
    bad.x0 = Vec(3, 0.0);
    CHECK_THROWS_AS(rotor::build(bad), invalid_input);
  }
}

TEST_CASE("closed-form solution") {
  const rotor::RotorParams p = bench_params();

  SECTION("response coefficient of the default data") {
    CHECK(rotor::response_coefficient(p) == Approx(0.10404 / 0.0404).margin(1e-12));
    CHECK(rotor::exact_envelope(p) == Approx(5.1504950495049495).margin(1e-10));
  }

  SECTION("initial condition is honoured") {
    CHECK(max_abs(vec_sub(rotor::closed_form_solution(p, 0.0), p.x0)) < 1e-15);
    rotor::RotorParams q = p;
    q.x0 = Vec{0.3, -0.2, 0.1, 0.4};
    CHECK(max_abs(vec_sub(rotor::closed_form_solution(q, 0.0), q.x0)) < 1e-15);
  }

  SECTION("agrees with the exact propagator, including general initial data") {
    rotor::RotorParams q = p;
    q.x0 = Vec{0.3, -0.2, 0.1, 0.4};
    const LinearSystem sys = rotor::build(q);
    double worst = 0.0;
    for (int i = 0; i <= 100; ++i) {
      const double t = i;
      worst = std::max(worst, max_abs(vec_sub(exact_reference(sys, ExtState{q.x0, 0.0}, t).x,
                                              rotor::closed_form_solution(q, t))));
    }
    CHECK(worst <= 1e-10);
  }

  SECTION("near-resonant parameters are refused") {
    rotor::RotorParams q = p;
    q.omega = 1.0 + 1e-12;
    CHECK_THROWS_AS(rotor::closed_form_solution(q, 1.0), invalid_input);
    CHECK_THROWS_AS(rotor::response_coefficient(q), invalid_input);
  }
}

TEST_CASE("envelope measurement") {
  const rotor::RotorParams p = bench_params();

  SECTION("zero trajectory has zero envelope") {
    Trajectory tr;
    tr.method = "test";
    tr.step_size = 1.0;
    for (int i = 0; i <= 400; ++i) {
      tr.times.push_back(i);
      tr.states.push_back(Vec(4, 0.0));
    }
    CHECK(rotor::envelope_amplitude(tr, 0, p.beat_period()) == 0.0);
  }

  SECTION("a plain sinusoid reports its amplitude") {
    Trajectory tr;
    tr.method = "test";
    tr.step_size = 0.01;
    for (int i = 0; i <= 1000; ++i) {
      const double t = 0.01 * i;
      tr.times.push_back(t);
      tr.states.push_back(Vec{0.7 * std::sin(3.0 * t), 0.0, 0.0, 0.0});
    }
    CHECK(rotor::envelope_amplitude(tr, 0, 0.0) == Approx(0.7).epsilon(1e-3));
  }

  SECTION("too short a span is rejected with the required span in the message") {
    const LinearSystem sys = rotor::build(p);
    const Trajectory tr = integrate(Method::exact, sys, p.x0, 0.0, 10.0, 0.1);
    try {
      rotor::envelope_amplitude(tr, 0, p.beat_period());
      FAIL("expected invalid_input");
    } catch (const invalid_input& e) {
      const std::string msg = e.what();
      CHECK(msg.find("314.1") != std::string::npos);  // 2 pi / 0.02
    }
  }

  SECTION("exact beat envelope is attained on a long run") {
    const LinearSystem sys = rotor::build(p);
    const Trajectory tr = integrate(Method::exact, sys, p.x0, 0.0, 1000.0, 0.05);
    const double env = rotor::envelope_amplitude(tr, 0, p.beat_period());
    CHECK(env <= rotor::exact_envelope(p) * (1.0 + 1e-9));
    CHECK(env >= rotor::exact_envelope(p) * 0.995);
  }

  SECTION("the two transverse components share the envelope") {
    const LinearSystem sys = rotor::build(p);
    const Trajectory tr = integrate(Method::exact, sys, p.x0, 0.0, 1000.0, 0.05);
    const double e1 = rotor::envelope_amplitude(tr, 0, p.beat_period());
    const double e2 = rotor::envelope_amplitude(tr, 1, p.beat_period());
    CHECK(e2 == Approx(e1).epsilon(0.025));
  }
}

TEST_CASE("rotor sub-algebra structure") {
  const rotor::RotorParams p = bench_params();
  const LinearSystem sys = rotor::build(p);
  const AlgebraSpec spec = rotor::algebra_spec(p);

  SECTION("the spec has dimension 23") { CHECK(dimension(spec).value() == 23); }

  SECTION("the rotor field closes with itself and with random members") {
    const LieElement own = sys.field();
    CHECK(closure_check(own, own, spec).pass());
    Rng rng(51);
    for (int trial = 0; trial < 20; ++trial) {
      const LieElement other = random_element(rng, spec);
      CHECK(closure_check(own, other, spec).pass());
      CHECK(closure_check(other, random_element(rng, spec), spec).pass());
    }
  }

  SECTION("spectrum sits on the imaginary axis at sqrt(k/m)") {
    CHECK(spectral_radius(sys.A.constant_coeff()) == Approx(1.0).margin(1e-12));
    rotor::RotorParams q = p;
    q.m = 0.5;
    q.k = 2.0;
    CHECK(spectral_radius(rotor::build(q).A.constant_coeff()) == Approx(2.0).margin(1e-12));
  }

  SECTION("the free flow stays bounded over a long window") {
    const Matrix& A = sys.A.constant_coeff();
    for (double t : {1.0, 10.0, 50.0, 100.0}) {
      // for m = k = 1 the generator is skew, the flow orthogonal
      CHECK(expm(t * A).frobenius_norm() == Approx(2.0).margin(1e-9));
    }
  }
}

TEST_CASE("resonance sweep") {
  rotor::RotorParams base = bench_params();

  SECTION("far-from-resonance response follows the closed form") {
    const auto rows = rotor::resonance_sweep(base, {3.0}, Method::exact, 0.05, 60.0);
    REQUIRE(rows.size() == 1);
    REQUIRE(rows[0].envelope.has_value());
    CHECK(rows[0].exact_envelope == Approx(2.0 * 0.1 * 9.0 / 8.0).margin(1e-12));
    // here both carrier factors are fast: max |cos 3t - cos t| = 8 / (3 sqrt 3)
    const double attained = rows[0].exact_envelope * 4.0 / (3.0 * std::sqrt(3.0));
    CHECK(rows[0].envelope.value() == Approx(attained).epsilon(0.01));
  }

  SECTION("approaching resonance from above grows monotonically") {
    const std::vector<double> grid{1.5, 1.3, 1.15, 1.05};
    const auto rows = rotor::resonance_sweep(bench_params(), grid, Method::exact, 0.05, 500.0);
    REQUIRE(rows.size() == 4);
    for (std::size_t i = 0; i + 1 < rows.size(); ++i) {
      CHECK(rows[i].exact_envelope < rows[i + 1].exact_envelope);
      REQUIRE(rows[i].envelope.has_value());
      CHECK(rows[i].envelope.value() < rows[i + 1].envelope.value());
    }
  }

  SECTION("zero unbalance gives zero envelopes") {
    rotor::RotorParams quiet = bench_params();
    quiet.eps = 0.0;
    const auto rows = rotor::resonance_sweep(quiet, {1.5, 2.0}, Method::strang, 0.05, 30.0);
    for (const auto& r : rows) {
      REQUIRE(r.envelope.has_value());
      CHECK(r.envelope.value() == 0.0);
      CHECK(r.exact_envelope == 0.0);
    }
  }

  SECTION("degenerate grid points are recorded without stopping the sweep") {
    const auto rows = rotor::resonance_sweep(bench_params(), {1.0, 1.5}, Method::exact, 0.05, 30.0);
    REQUIRE(rows.size() == 2);
    CHECK_FALSE(rows[0].envelope.has_value());
    CHECK_FALSE(rows[0].note.empty());
    CHECK(rows[1].envelope.has_value());
  }
}
