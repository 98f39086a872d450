#pragma once

#include <array>
#include <memory>

#include "bora/bench/objective.hpp"

namespace bora::bench {

// Launch parameters, in the order of the 7D space:
// pitch deg, yaw deg, velocity m/s, spin rpm, spin-axis deg, height m, mass kg.
struct PetanqueParams {
    double pitch_deg = 0.0;
    double yaw_deg = 0.0;
    double velocity = 0.0;
    double spin_rpm = 0.0;
    double spin_axis_deg = 0.0;
    double height = 0.0;
    double mass = 0.1;

    static PetanqueParams from_point(const core::Point& p);
};

struct PetanquePhysics {
    double gravity = 9.81;          // m/s^2
    double air_density = 1.225;     // kg/m^3
    double ball_radius = 0.037;     // m
    double drag_coefficient = 0.47;
    double magnus_coefficient = 1e-4;  // force per (rad/s * m/s)
    double dt = 0.01;
    bool drag_on = true;
    bool magnus_on = true;
};

struct Landing {
    double x = 0.0;
    double y = 0.0;
};

// Explicit Euler flight integration from (0, 0, h); stops at the first step
// with z <= 0 and linearly interpolates the ground crossing.
Landing petanque_simulate(const PetanqueParams& params, const PetanquePhysics& physics = {});

// 100 * exp(-0.2 * distance to the target at (50, 0, 0)).
double petanque_score(const Landing& landing);

core::SearchSpace petanque_space();
std::unique_ptr<Objective> make_petanque();

}  // namespace bora::bench
