#include <doctest.h>

#include <cmath>
#include <fstream>
#include <functional>

#include "bora/bench/hydrogen.hpp"
#include "bora/bench/objective.hpp"
#include "bora/bench/petanque.hpp"
#include "bora/bench/synthetic.hpp"
#include "bora/core/rng.hpp"

using namespace bora;

namespace {

// independent term-by-term transcription of the standard Levy sum (before negation)
double levy_reference(const std::vector<double>& x) {
    const std::size_t d = x.size();
    auto w = [&](std::size_t i) { return 1.0 + (x[i] - 1.0) / 4.0; };
    double total = std::pow(std::sin(M_PI * w(0)), 2);
    for (std::size_t i = 0; i + 1 < d; ++i)
        total += std::pow(w(i) - 1.0, 2) *
                 (1.0 + 10.0 * std::pow(std::sin(M_PI * w(i) + 1.0), 2));
    total += std::pow(w(d - 1) - 1.0, 2) *
             (1.0 + std::pow(std::sin(2.0 * M_PI * w(d - 1)), 2));
    return total;
}

double ackley_reference(const std::vector<double>& x) {
    const double d = double(x.size());
    double sq = 0.0, cs = 0.0;
    for (double v : x) {
        sq += v * v;
        cs += std::cos(2.0 * M_PI * v);
    }
    return -20.0 * std::exp(-0.2 * std::sqrt(sq / d)) - std::exp(cs / d) + 20.0 + M_E;
}

}  // namespace

TEST_CASE("branin anchors") {
    // the three equal-valued optima of the negated form
    const double at_pi = bench::branin({M_PI, 2.275});
    CHECK(at_pi == doctest::Approx(-0.397887).epsilon(1e-4));
    CHECK(bench::branin({-M_PI, 12.275}) == doctest::Approx(at_pi).epsilon(1e-4));
    CHECK(bench::branin({9.42478, 2.475}) == doctest::Approx(at_pi).epsilon(1e-4));
    CHECK(bench::branin({0.0, 0.0}) == doctest::Approx(-55.602113).epsilon(1e-6));
    CHECK(bench::kBraninBest == doctest::Approx(at_pi).epsilon(1e-6));
}

TEST_CASE("levy anchors and reference equivalence") {
    std::vector<double> ones(10, 1.0);
    CHECK(std::abs(bench::levy(ones)) < 1e-10);

    core::Rng rng(15);
    const auto space = bench::levy_space(10);
    for (int i = 0; i < 50; ++i) {
        auto p = core::sample_uniform(space, rng, 1).front();
        CHECK(bench::levy(p) == doctest::Approx(-levy_reference(p)).epsilon(1e-12));
        CHECK(bench::levy(p) <= 0.0);
    }
    // 2D evaluated against the hand-expanded terms
    CHECK(bench::levy({0.0, 0.0}) == doctest::Approx(-0.7158445541).epsilon(1e-9));
}

TEST_CASE("ackley anchors and reference equivalence") {
    std::vector<double> zeros(15, 0.0);
    CHECK(std::abs(bench::ackley(zeros)) < 1e-12);

    std::vector<double> corner(15, 20.0);
    CHECK(bench::ackley(corner) == doctest::Approx(-19.633687).epsilon(1e-5));
    CHECK(bench::ackley(corner) < -15.0);

    // |value| grows along the diagonal ray
    double last = 0.0;
    for (double t : {0.1, 1.0, 5.0}) {
        std::vector<double> p(15, t);
        const double v = std::abs(bench::ackley(p));
        CHECK(v > last);
        last = v;
    }

    core::Rng rng(16);
    const auto space = bench::ackley_space(15);
    for (int i = 0; i < 50; ++i) {
        auto p = core::sample_uniform(space, rng, 1).front();
        CHECK(bench::ackley(p) == doctest::Approx(-ackley_reference(p)).epsilon(1e-12));
    }
}

TEST_CASE("synthetic optima dominate uniform samples") {
    core::Rng rng(99);
    const auto levy_sp = bench::levy_space(10);
    const auto ackley_sp = bench::ackley_space(15);
    auto levy_points = core::sample_uniform(levy_sp, rng, 20000);
    auto ackley_points = core::sample_uniform(ackley_sp, rng, 20000);
    for (const auto& p : levy_points) CHECK(bench::levy(p) <= 0.0);
    for (const auto& p : ackley_points) CHECK(bench::ackley(p) <= 0.0);
}

TEST_CASE("petanque free fall lands at the origin") {
    bench::PetanqueParams params;
    params.velocity = 0.0;
    params.height = 1.0;
    params.mass = 0.7;
    const auto landing = bench::petanque_simulate(params);
    CHECK(std::abs(landing.x) < 1e-9);
    CHECK(std::abs(landing.y) < 1e-9);
}

TEST_CASE("petanque matches the analytic ballistic range without drag") {
    bench::PetanquePhysics physics;
    physics.drag_on = false;
    physics.magnus_on = false;

    bench::PetanqueParams params;
    params.pitch_deg = 45.0;
    params.velocity = 20.0;
    params.height = 0.0;
    params.mass = 0.7;
    const auto landing = bench::petanque_simulate(params, physics);
    const double expected = 20.0 * 20.0 / 9.81;  // v^2 sin(2*45deg) / g
    CHECK(std::abs(landing.x - expected) / expected < 0.01);
    CHECK(std::abs(landing.y) < 1e-9);

    // random launches with flight times long enough for the one-step Euler
    // landing bias (~ g*dt / (2 v sin(pitch)) relative) to stay under 1%
    core::Rng rng(55);
    for (int i = 0; i < 20; ++i) {
        bench::PetanqueParams p;
        p.pitch_deg = rng.uniform(20.0, 80.0);
        p.velocity = rng.uniform(20.0, 50.0);
        p.yaw_deg = rng.uniform(-180.0, 180.0);
        p.mass = rng.uniform(0.1, 10.0);
        p.height = 0.0;
        const auto land = bench::petanque_simulate(p, physics);
        const double range = std::hypot(land.x, land.y);
        const double theta = p.pitch_deg * M_PI / 180.0;
        const double analytic = p.velocity * p.velocity * std::sin(2.0 * theta) / 9.81;
        CHECK(std::abs(range - analytic) / analytic < 0.01);
    }
}

TEST_CASE("petanque zero spin makes the magnus toggle irrelevant") {
    bench::PetanqueParams params;
    params.pitch_deg = 30.0;
    params.velocity = 25.0;
    params.spin_rpm = 0.0;
    params.spin_axis_deg = 90.0;
    params.height = 1.0;
    params.mass = 0.7;

    bench::PetanquePhysics with_magnus;
    bench::PetanquePhysics without_magnus;
    without_magnus.magnus_on = false;
    const auto a = bench::petanque_simulate(params, with_magnus);
    const auto b = bench::petanque_simulate(params, without_magnus);
    CHECK(a.x == b.x);
    CHECK(a.y == b.y);
}

TEST_CASE("petanque spin curves the trajectory") {
    bench::PetanqueParams params;
    params.pitch_deg = 30.0;
    params.velocity = 25.0;
    params.spin_rpm = 3000.0;
    params.spin_axis_deg = 0.0;  // spin about +x bends the path sideways
    params.height = 1.0;
    params.mass = 0.2;
    const auto spun = bench::petanque_simulate(params);
    params.spin_rpm = 0.0;
    const auto straight = bench::petanque_simulate(params);
    CHECK(std::abs(spun.y - straight.y) > 0.01);
}

TEST_CASE("petanque drag shortens the range") {
    core::Rng rng(77);
    for (int i = 0; i < 20; ++i) {
        bench::PetanqueParams p;
        p.pitch_deg = rng.uniform(15.0, 75.0);
        p.velocity = rng.uniform(10.0, 50.0);
        p.mass = rng.uniform(0.1, 2.0);
        p.height = 0.0;
        bench::PetanquePhysics dragless;
        dragless.drag_on = false;
        dragless.magnus_on = false;
        bench::PetanquePhysics draggy;
        draggy.magnus_on = false;
        const double with_drag = bench::petanque_simulate(p, draggy).x;
        const double without = bench::petanque_simulate(p, dragless).x;
        CHECK(with_drag < without);
    }
}

TEST_CASE("petanque halving dt moves landings by less than one percent") {
    core::Rng rng(88);
    for (int i = 0; i < 20; ++i) {
        bench::PetanqueParams p;
        p.pitch_deg = rng.uniform(10.0, 80.0);
        p.velocity = rng.uniform(5.0, 50.0);
        p.spin_rpm = rng.uniform(0.0, 3000.0);
        p.spin_axis_deg = rng.uniform(-180.0, 180.0);
        p.height = rng.uniform(0.0, 2.0);
        p.mass = rng.uniform(0.1, 10.0);
        bench::PetanquePhysics coarse;
        bench::PetanquePhysics fine;
        fine.dt = 0.005;
        const auto a = bench::petanque_simulate(p, coarse);
        const auto b = bench::petanque_simulate(p, fine);
        const double moved = std::hypot(a.x - b.x, a.y - b.y);
        const double scale = std::max(1.0, std::hypot(b.x, b.y));
        CHECK(moved / scale < 0.01);
    }
}

TEST_CASE("petanque score anchors") {
    CHECK(bench::petanque_score({50.0, 0.0}) == doctest::Approx(100.0));
    CHECK(bench::petanque_score({0.0, 0.0}) == doctest::Approx(100.0 * std::exp(-10.0)));
    CHECK(bench::petanque_score({45.0, 0.0}) == doctest::Approx(36.78794).epsilon(1e-5));
    CHECK_THROWS(bench::petanque_score({std::nan(""), 0.0}));
}

TEST_CASE("petanque objective is deterministic") {
    auto obj = bench::make_petanque();
    core::Rng rng(5);
    auto p = core::sample_uniform(obj->space(), rng, 1).front();
    const double a = obj->evaluate(p);
    const double b = obj->evaluate(p);
    CHECK(a == b);
    CHECK(a > 0.0);
    CHECK(a <= 100.0);
}

TEST_CASE("hydrogen oracle peak location and value") {
    // documented peak, fixed by scan + grid hill-climb during oracle design
    CHECK(bench::synthetic_hydrogen_oracle(bench::kSyntheticPeakComposition) ==
          doctest::Approx(bench::kSyntheticPeakValue).epsilon(1e-12));

    // coarse feasible scan (liquids on a 1.25 mL grid, solid at 1/3/5 g)
    // never beats the documented peak and lands in its basin
    const auto space = bench::hydrogen_space();
    const std::vector<double> levels{0.0, 1.25, 2.5, 3.75, 5.0};
    core::Point best_coarse;
    double best_value = -1.0;
    std::vector<double> liquids(9, 0.0);
    std::function<void(std::size_t, double)> scan = [&](std::size_t liquid, double sum) {
        if (liquid == 9) {
            for (double solid : {1.0, 3.0, 5.0}) {
                core::Point p;
                std::size_t li = 0;
                for (std::size_t i = 0; i < 10; ++i)
                    p.push_back(i == 5 ? solid : liquids[li++]);
                const double v = bench::synthetic_hydrogen_oracle(p);
                if (v > best_value) {
                    best_value = v;
                    best_coarse = p;
                }
            }
            return;
        }
        for (double level : levels) {
            if (sum + level > 5.0) continue;
            liquids[liquid] = level;
            scan(liquid + 1, sum + level);
        }
        liquids[liquid] = 0.0;
    };
    scan(0, 0.0);
    CHECK(best_value <= bench::kSyntheticPeakValue);
    CHECK(best_value > 22.0);  // the coarse grid reaches the peak's basin

    // grid hill-climb from the coarse best reaches the documented peak
    core::Point current = best_coarse;
    double value = best_value;
    bool improved = true;
    while (improved) {
        improved = false;
        for (std::size_t i = 0; i < 10; ++i) {
            const auto& var = space.variables()[i];
            for (double delta : {-var.step, var.step}) {
                core::Point cand = current;
                cand[i] += delta;
                if (!core::contains(space, cand)) continue;
                const double v = bench::synthetic_hydrogen_oracle(cand);
                if (v > value + 1e-12) {
                    value = v;
                    current = cand;
                    improved = true;
                }
            }
        }
    }
    CHECK(value == doctest::Approx(bench::kSyntheticPeakValue).epsilon(1e-12));
    for (std::size_t i = 0; i < 10; ++i)
        CHECK(current[i] == doctest::Approx(bench::kSyntheticPeakComposition[i]));
}

TEST_CASE("hydrogen objective contract") {
    auto obj = bench::make_hydrogen();
    core::Rng rng(21);
    for (auto& p : core::sample_uniform(obj->space(), rng, 200)) {
        const double v = obj->evaluate(p);
        CHECK(std::isfinite(v));
        CHECK(v >= 0.0);
    }
    // infeasible: liquid sum over the cap
    core::Point infeasible{1, 1, 1, 1, 1, 1.0, 1, 1, 1, 1};
    CHECK_THROWS(obj->evaluate(infeasible));
    CHECK(obj->best_known() == bench::kSyntheticPeakValue);
}

TEST_CASE("hydrogen table oracle lookup") {
    const std::string path = "/tmp/bora_test_table.jsonl";
    {
        std::ofstream out(path);
        out << R"({"x": [0,0,0,0,0,1.0,0,0,0,0], "y": 1.5})" << "\n";
        out << R"({"x": [0.25,0,0,0,0,1.0,0,0,0,0], "y": 2.5})" << "\n";
    }
    auto oracle = bench::table_oracle_from_jsonl(path);
    CHECK(oracle({0, 0, 0, 0, 0, 1.0, 0, 0, 0, 0}) == 1.5);
    CHECK(oracle({0.25, 0, 0, 0, 0, 1.0, 0, 0, 0, 0}) == 2.5);
    // nearest-neighbour fallback for a grid point outside the table
    CHECK(oracle({0.5, 0, 0, 0, 0, 1.0, 0, 0, 0, 0}) == 2.5);
}

TEST_CASE("objective registry") {
    auto names = bench::objective_names();
    CHECK(names.size() >= 5);
    for (const auto* name : {"branin", "levy10", "ackley15", "petanque", "hydrogen"}) {
        auto obj = bench::make_objective(name);
        CHECK(obj->name() == name);
        CHECK(obj->space().dimension() >= 2);
        CHECK_NOTHROW(obj->card().validate());
    }
    CHECK_THROWS(bench::make_objective("nope"));

    // synthetic cards are anonymized: no function names leak to the LLM
    auto branin_card = bench::make_objective("branin")->card();
    CHECK(branin_card.title.find("ranin") == std::string::npos);
    CHECK(branin_card.description.find("ranin") == std::string::npos);
}
