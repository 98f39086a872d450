#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "bora/core/rng.hpp"
#include "bora/policy/policy.hpp"

using namespace bora;

namespace {

policy::PolicyConfig default_config(std::size_t d) {
    return policy::PolicyConfig{}.resolved(d);
}

}  // namespace

TEST_CASE("plateau window initialization") {
    CHECK(policy::m_init_for(15) == 8);
    CHECK(policy::m_init_for(1) == 2);
    CHECK(policy::m_init_for(10) == 7);
    CHECK(default_config(15).m_max == 24);
    CHECK(default_config(2).m_init == 3);
}

TEST_CASE("uncertainty update from monitor stds") {
    const auto cfg = default_config(2);
    policy::PolicyState state = policy::PolicyState::initial(cfg, 2);

    std::vector<double> stds{1.0, 2.0};
    policy::update_uncertainty(state, cfg, stds);
    CHECK(state.sigma_mean == doctest::Approx(1.5));
    CHECK(state.sigma_max_running == doctest::Approx(2.0));
    CHECK(state.sigma_upper == doctest::Approx(1.0));
    CHECK(state.sigma_lower == doctest::Approx(0.6));

    // the running max never decreases
    std::vector<double> lower{0.5, 1.2};
    policy::update_uncertainty(state, cfg, lower);
    CHECK(state.sigma_max_running == doctest::Approx(2.0));
    CHECK(state.sigma_mean == doctest::Approx(0.85));

    policy::PolicyState single = policy::PolicyState::initial(cfg, 2);
    std::vector<double> one{0.4};
    policy::update_uncertainty(single, cfg, one);
    CHECK(single.sigma_mean == doctest::Approx(0.4));
}

TEST_CASE("plateau detection") {
    SUBCASE("stagnating positive history") {
        CHECK(policy::plateau_detected({10.0, 10.2, 10.3, 10.4}, 3, 0.05));
    }
    SUBCASE("a strong step breaks the plateau") {
        CHECK_FALSE(policy::plateau_detected({10.0, 10.6}, 1, 0.05));
    }
    SUBCASE("negative values use the sign-aware threshold") {
        // threshold is -10 * (1 - 0.05) = -9.5; -9.6 < -9.5 counts as stagnation
        CHECK(policy::plateau_detected({-10.0, -9.6}, 1, 0.05));
        // improving past the negative threshold breaks it
        CHECK_FALSE(policy::plateau_detected({-10.0, -9.4}, 1, 0.05));
    }
    SUBCASE("window not yet filled") {
        CHECK_FALSE(policy::plateau_detected({10.0, 10.1}, 3, 0.05));
        CHECK_FALSE(policy::plateau_detected({}, 1, 0.05));
    }
    SUBCASE("m = 0 is vacuously a plateau") {
        CHECK(policy::plateau_detected({}, 0, 0.05));
        CHECK(policy::plateau_detected({1.0, 100.0}, 0, 0.05));
    }
}

TEST_CASE("action selection bullets") {
    policy::PolicyState state;
    state.sigma_lower = 0.6;
    state.sigma_upper = 1.0;

    state.sigma_mean = 0.2;
    CHECK(policy::select_action(state, true) == policy::Action::A1VanillaBo);
    CHECK(policy::select_action(state, false) == policy::Action::A1VanillaBo);

    state.sigma_mean = 1.5;
    CHECK(policy::select_action(state, true) == policy::Action::A2LlmSuggest);
    CHECK(policy::select_action(state, false) == policy::Action::A1VanillaBo);

    state.sigma_mean = 0.8;
    CHECK(policy::select_action(state, true) == policy::Action::A3LlmSelect);
    CHECK(policy::select_action(state, false) == policy::Action::A1VanillaBo);
}

TEST_CASE("action selection equals a direct transcription on random tuples") {
    core::Rng rng(404);
    for (int i = 0; i < 1000; ++i) {
        policy::PolicyState state;
        const double sigma_max = rng.uniform(0.0, 5.0);
        state.sigma_max_running = sigma_max;
        state.sigma_upper = 0.5 * sigma_max;
        state.sigma_lower = 0.3 * sigma_max;
        state.sigma_mean = rng.uniform(0.0, 5.0);
        const bool plateau = rng.uniform() < 0.5;

        // transcription: a1 on low uncertainty or no plateau, a2 above the
        // upper bound, a3 in between
        policy::Action expected;
        if (state.sigma_mean < state.sigma_lower || !plateau)
            expected = policy::Action::A1VanillaBo;
        else if (state.sigma_mean > state.sigma_upper)
            expected = policy::Action::A2LlmSuggest;
        else
            expected = policy::Action::A3LlmSelect;
        CHECK(policy::select_action(state, plateau) == expected);
    }
}

TEST_CASE("intervention score") {
    CHECK(policy::intervention_score(0.5, 10.0, 1e-6) == 1.0);
    CHECK(policy::intervention_score(0.0, 5.0, 1e-6) == 0.5);
    CHECK(policy::intervention_score(-2.0, 2.0, 1e-6) ==
          doctest::Approx(0.26894).epsilon(1e-4));
    // zero previous best: epsilon keeps the sigmoid defined
    CHECK(policy::intervention_score(-0.5, 0.0, 1e-6) == 0.0);

    // monotone nondecreasing in r for fixed y_prev_max
    core::Rng rng(7);
    for (int i = 0; i < 200; ++i) {
        const double y = rng.uniform(-10.0, 10.0);
        const double r1 = rng.uniform(-5.0, 5.0);
        const double r2 = r1 + rng.uniform(0.0, 3.0);
        CHECK(policy::intervention_score(r2, y, 1e-6) >=
              policy::intervention_score(r1, y, 1e-6));
    }
}

TEST_CASE("record_intervention worked examples") {
    auto cfg = default_config(15);  // m_init 8, window [0, 24]

    SUBCASE("first successful intervention leaves m unchanged") {
        policy::PolicyState state = policy::PolicyState::initial(cfg, 15);
        std::vector<double> values{11.0};  // r = 1 > 0, score 1
        policy::record_intervention(state, cfg, values, 10.0);
        CHECK(state.trust_history.size() == 2);
        CHECK(state.trust_history.back() == 1.0);
        CHECK(state.trust_current == doctest::Approx(0.95));  // W = 2
        CHECK(state.m == 8);  // floor(0.05 * 15) = 0
    }
    SUBCASE("window covers the three most recent scores") {
        policy::PolicyState state = policy::PolicyState::initial(cfg, 15);
        state.trust_history = {0.9, 1.0, 0.5};
        state.trust_current = (0.9 + 1.0 + 0.5) / 3.0;
        std::vector<double> tie{10.0};  // r = 0, score exactly 0.5
        policy::record_intervention(state, cfg, tie, 10.0);
        CHECK(state.trust_history.back() == 0.5);
        CHECK(state.trust_current == doctest::Approx((1.0 + 0.5 + 0.5) / 3.0));
    }
    SUBCASE("trust drop widens the plateau window, clipped at m_max") {
        policy::PolicyState state = policy::PolicyState::initial(cfg, 15);
        state.m = 23;
        state.trust_current = 0.9;
        state.trust_history = {0.9, 0.9, 0.9};
        // strongly negative reward with zero y_prev drives the score to 0:
        // T drops 0.9 -> 0.6, adjustment floor(-4.5) = -5, m 23 -> 28 -> clip 24
        std::vector<double> values{-1000.0};
        policy::record_intervention(state, cfg, values, 0.0);
        CHECK(state.trust_history.back() == doctest::Approx(0.0));
        CHECK(state.trust_current == doctest::Approx(0.6));
        CHECK(state.m == cfg.m_max);
    }
}

TEST_CASE("ten-intervention trust ledger reproduces the hand-computed table") {
    // independently computed from the score/trust/window recurrences with
    // H0 = {0.9}, delta_max = 15, m_init = 8, clip [0, 24]
    struct Row {
        double r, y_prev, score, trust;
        int m;
    };
    const Row table[] = {
        {0.5, 10, 1, 0.94999999999999996, 8},
        {-2, 2, 0.26894151967592395, 0.72298050655864132, 12},
        {1.2, -3, 1, 0.75631383989197465, 12},
        {0, 5, 0.5, 0.58964717322530802, 15},
        {-0.5, 0, 0, 0.5, 17},
        {-3, 100, 0.49250056252436275, 0.33083352084145429, 20},
        {-10, 10, 0.26894144103118695, 0.25381400118518321, 22},
        {-0.1, 0.1, 0.26894338747420932, 0.34346179700991969, 21},
        {-1e-09, 0, 0.49975000002083331, 0.34587827617540984, 21},
        {0.7, -0.2, 1, 0.58956446249834749, 18},
    };

    auto cfg = default_config(15);
    policy::PolicyState state = policy::PolicyState::initial(cfg, 15);
    for (const auto& row : table) {
        std::vector<double> values{row.y_prev + row.r};
        policy::record_intervention(state, cfg, values, row.y_prev);
        CHECK(state.trust_history.back() == doctest::Approx(row.score).epsilon(1e-12));
        CHECK(state.trust_current == doctest::Approx(row.trust).epsilon(1e-12));
        CHECK(state.m == row.m);
    }
}

TEST_CASE("trust invariants over random intervention streams") {
    core::Rng rng(606);
    auto cfg = default_config(10);  // m_init 7, m_max 21
    policy::PolicyState state = policy::PolicyState::initial(cfg, 10);
    for (int i = 0; i < 500; ++i) {
        const double y_prev = rng.uniform(-20.0, 20.0);
        std::vector<double> values;
        const std::size_t k = 1 + rng.uniform_index(3);
        for (std::size_t j = 0; j < k; ++j) values.push_back(y_prev + rng.uniform(-10.0, 10.0));
        policy::record_intervention(state, cfg, values, y_prev);
        CHECK(state.m >= cfg.m_min);
        CHECK(state.m <= cfg.m_max);
        CHECK(state.trust_current >= 0.0);
        CHECK(state.trust_current <= 1.0);
        CHECK(state.trust_history.back() >= 0.0);
        CHECK(state.trust_history.back() <= 1.0);
        const std::size_t window = std::min(state.trust_history.size(), std::size_t{3});
        double sum = 0.0;
        for (std::size_t j = state.trust_history.size() - window;
             j < state.trust_history.size(); ++j)
            sum += state.trust_history[j];
        CHECK(state.trust_current == doctest::Approx(sum / double(window)).epsilon(1e-12));
    }
}

TEST_CASE("all-successful interventions never widen the window") {
    auto cfg = default_config(15);
    policy::PolicyState state = policy::PolicyState::initial(cfg, 15);
    int previous_m = state.m;
    for (int i = 0; i < 20; ++i) {
        std::vector<double> values{100.0 + i};  // always improving: score 1.0
        policy::record_intervention(state, cfg, values, 50.0);
        CHECK(state.m <= previous_m);
        previous_m = state.m;
    }
    CHECK(state.m >= cfg.m_min);
}
