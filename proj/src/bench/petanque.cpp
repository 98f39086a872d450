#include "bora/bench/petanque.hpp"

#include <cmath>
#include <stdexcept>

namespace bora::bench {

namespace {
constexpr double kDegToRad = M_PI / 180.0;
constexpr double kRpmToRadPerSec = 2.0 * M_PI / 60.0;

struct Vec3 {
    double x = 0.0, y = 0.0, z = 0.0;
    Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
    Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
    Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
    double norm() const { return std::sqrt(x * x + y * y + z * z); }
};

Vec3 cross(const Vec3& a, const Vec3& b) {
    return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}
}  // namespace

PetanqueParams PetanqueParams::from_point(const core::Point& p) {
    if (p.size() != 7) throw std::invalid_argument("petanque: expected 7 inputs");
    return {p[0], p[1], p[2], p[3], p[4], p[5], p[6]};
}

Landing petanque_simulate(const PetanqueParams& params, const PetanquePhysics& physics) {
    const double pitch = params.pitch_deg * kDegToRad;
    const double yaw = params.yaw_deg * kDegToRad;
    const double spin_axis = params.spin_axis_deg * kDegToRad;
    const double omega_mag = params.spin_rpm * kRpmToRadPerSec;
    const double area = M_PI * physics.ball_radius * physics.ball_radius;

    Vec3 pos{0.0, 0.0, params.height};
    Vec3 vel{params.velocity * std::cos(pitch) * std::cos(yaw),
             params.velocity * std::cos(pitch) * std::sin(yaw),
             params.velocity * std::sin(pitch)};
    const Vec3 omega{omega_mag * std::cos(spin_axis), omega_mag * std::sin(spin_axis), 0.0};

    const double dt = physics.dt;
    const Vec3 gravity{0.0, 0.0, -physics.gravity};
    const int max_steps = static_cast<int>(1e7);

    for (int step = 0; step < max_steps; ++step) {
        Vec3 force{0.0, 0.0, 0.0};
        if (physics.drag_on) {
            const double speed = vel.norm();
            force = force + vel * (-0.5 * physics.air_density * physics.drag_coefficient * area *
                                   speed);
        }
        if (physics.magnus_on) force = force + cross(omega, vel) * physics.magnus_coefficient;

        const Vec3 accel = gravity + force * (1.0 / params.mass);
        const Vec3 new_pos = pos + vel * dt;
        const Vec3 new_vel = vel + accel * dt;

        if (!std::isfinite(new_pos.x) || !std::isfinite(new_pos.y) || !std::isfinite(new_pos.z) ||
            !std::isfinite(new_vel.x) || !std::isfinite(new_vel.y) || !std::isfinite(new_vel.z))
            throw std::runtime_error("petanque: simulation state became non-finite");

        if (new_pos.z <= 0.0) {
            // interpolate the ground crossing between pos and new_pos
            const double denom = pos.z - new_pos.z;
            const double lambda = denom > 0.0 ? pos.z / denom : 1.0;
            return {pos.x + lambda * (new_pos.x - pos.x), pos.y + lambda * (new_pos.y - pos.y)};
        }
        pos = new_pos;
        vel = new_vel;
    }
    throw std::runtime_error("petanque: projectile never landed");
}

double petanque_score(const Landing& landing) {
    if (!std::isfinite(landing.x) || !std::isfinite(landing.y))
        throw std::invalid_argument("petanque_score: non-finite landing");
    const double dx = landing.x - 50.0;
    const double dy = landing.y;
    const double distance_error = std::sqrt(dx * dx + dy * dy);
    return 100.0 * std::exp(-0.2 * distance_error);
}

core::SearchSpace petanque_space() {
    return core::SearchSpace({
        {"pitch_angle", core::VarKind::Continuous, -30.0, 90.0, 0.0, "deg",
         "vertical launch angle; 0 is parallel to the ground"},
        {"yaw_angle", core::VarKind::Continuous, -180.0, 180.0, 0.0, "deg",
         "horizontal aiming angle; 0 aims straight at the target"},
        {"initial_velocity", core::VarKind::Continuous, 0.0, 50.0, 0.0, "m/s",
         "magnitude of the launch velocity"},
        {"spin_rate", core::VarKind::Continuous, 0.0, 3000.0, 0.0, "rpm",
         "rotational speed of the ball"},
        {"spin_axis", core::VarKind::Continuous, -180.0, 180.0, 0.0, "deg",
         "direction of the spin axis in the xy-plane; 0 aligns with +x"},
        {"initial_height", core::VarKind::Continuous, 0.0, 2.0, 0.0, "m",
         "height above the ground at release"},
        {"mass", core::VarKind::Continuous, 0.01, 10.0, 0.0, "kg", "mass of the ball"},
    });
}

std::unique_ptr<Objective> make_petanque() {
    core::ExperimentCard card;
    card.title = "Petanque throw";
    card.description =
        "A single player throws a ball at a fixed target 50 meters away along the +x axis, on "
        "flat ground. The flight is simulated with gravity, air drag, and the Magnus effect from "
        "ball spin. The launch is released from (0, 0, height).";
    card.target_name = "score";
    card.target_description =
        "100 * exp(-0.2 * distance between the landing point and the target); closer landings "
        "score exponentially higher, with 100 for a direct hit";
    card.space = petanque_space();
    return std::make_unique<FunctionObjective>(
        "petanque", std::move(card),
        [](const core::Point& p) {
            return petanque_score(petanque_simulate(PetanqueParams::from_point(p)));
        },
        100.0);
}

}  // namespace bora::bench
