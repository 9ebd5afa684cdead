// Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any
// criterion fails. Tolerances are fixed here and nowhere else.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "agrione/calib.hpp"
#include "agrione/error.hpp"
#include "agrione/fieldsim.hpp"
#include "agrione/geomap.hpp"
#include "agrione/mission.hpp"
#include "agrione/sampler.hpp"
#include "agrione/scenario.hpp"
#include "agrione/sdi12.hpp"
#include "oracles.hpp"

using namespace agrione;

namespace {

const std::string kFieldTrial = std::string(AGRIONE_SCENARIO_DIR) + "/field_trial.json";

struct Verdict {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char* f, auto... args) {
    char buf[256];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

Verdict field_trial_scenario() {
    const auto start = std::chrono::steady_clock::now();
    const auto cfg = scenario::load_scenario(kFieldTrial);
    const auto result = mission::run_mission(cfg.mission);
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const auto& s = result.summary;
    const bool ok = s.points_total == 95 && s.points_valid == 70 && s.points_invalid == 25 &&
                    seconds <= 5.0;
    return {ok, fmt("total=%d valid=%d invalid=%d runtime=%.3fs (want 95/70/25, <=5s)",
                    s.points_total, s.points_valid, s.points_invalid, seconds)};
}

Verdict calibration_arithmetic() {
    const double at_2000 = calib::raw_to_vwc(2000.0).theta;
    const double err_2000 = std::fabs(at_2000 - 0.0802);
    // Crossover located by bisection on the conversion itself.
    double lo = 0.0, hi = 5000.0;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        (calib::raw_to_vwc(mid).theta < 0.0 ? lo : hi) = mid;
    }
    const double crossover_err = std::fabs(0.5 * (lo + hi) - 0.6956 / 3.879e-4);
    return {err_2000 <= 1e-9 && crossover_err <= 1e-6,
            fmt("|theta(2000)-0.0802|=%.2e (<=1e-9) |crossover-0.6956/3.879e-4|=%.2e (<=1e-6)",
                err_2000, crossover_err)};
}

Verdict inverse_model() {
    const auto spec = fieldsim::default_field();
    fieldsim::Rng noise(1), pick(2);
    std::uniform_real_distribution<double> ux(0.0, spec.width_m), uy(0.0, spec.height_m);
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
        const double x = ux(pick), y = uy(pick);
        const double theta = calib::raw_to_vwc(fieldsim::sense_raw(spec, x, y, noise)).theta;
        worst = std::max(worst, std::fabs(theta - fieldsim::theta_true(spec, x, y)));
    }
    return {worst <= 1e-9, fmt("max |recovered-true| over 1000 points = %.2e (<=1e-9)", worst)};
}

Verdict codec_properties() {
    using namespace sdi12;
    std::mt19937_64 rng(2718);
    const std::string alphabet = "0123456789abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ";
    int mismatches = 0;
    for (int i = 0; i < 10000; ++i) {
        const Address a(alphabet[rng() % alphabet.size()]);
        std::string first, second;
        switch (i % 3) {
        case 0: {
            const Command cmds[] = {Command::address_query(), Command::acknowledge(a),
                                    Command::identify(a), Command::start_measurement(a),
                                    Command::send_data(a, static_cast<int>(rng() % 10))};
            first = encode_command(cmds[rng() % 5]);
            second = encode_command(parse_command(first));
            break;
        }
        case 1:
            first = encode_measure_ack({a, static_cast<int>(rng() % 1000), static_cast<int>(rng() % 10)});
            second = encode_measure_ack(parse_measure_ack(first));
            break;
        default: {
            DataResponse d{a, {}};
            const std::size_t n = rng() % (kMaxValuesPerFrame + 1);
            for (std::size_t k = 0; k < n; ++k) {
                d.values.push_back(std::uniform_real_distribution<double>(-1e5, 1e5)(rng));
            }
            first = encode_data_response(d);
            const auto back = parse_data_response(first);
            for (std::size_t k = 0; k < n; ++k) {
                mismatches += std::memcmp(&back.values[k], &d.values[k], sizeof(double)) != 0;
            }
            second = encode_data_response(back);
        }
        }
        mismatches += first != second;
    }

    const std::string biased = "0123456789+-.!?\r\naDMI";
    long typed = 0, untyped = 0, accepted = 0;
    for (int i = 0; i < 100000; ++i) {
        std::string s(rng() % 20, '\0');
        for (char& c : s) {
            c = (rng() % 2) ? biased[rng() % biased.size()] : static_cast<char>(rng() % 256);
        }
        const std::function<void()> parsers[] = {
            [&] { (void)parse_command(s); }, [&] { (void)parse_measure_ack(s); },
            [&] { (void)parse_data_response(s); }, [&] { (void)parse_address_reply(s); }};
        for (const auto& p : parsers) {
            try {
                p();
                ++accepted;
            } catch (const agrione::Error&) {
                ++typed;
            } catch (...) {
                ++untyped;
            }
        }
    }
    return {mismatches == 0 && untyped == 0,
            fmt("round-trip mismatches=%d of 10000; fuzz 100000 inputs: typed errors=%ld accepted=%ld untyped=%ld",
                mismatches, typed, accepted, untyped)};
}

Verdict fsm_safety() {
    std::mt19937_64 rng(500);
    std::uniform_real_distribution<double> pos(0.5, 9.5), jitter(-0.3, 0.3), radius(0.0, 0.4);
    int violations = 0;
    int worst_attempts = 0;
    const sampler::SamplerConfig cfg;
    for (int run = 0; run < 500; ++run) {
        fieldsim::FieldSpec spec;
        spec.width_m = spec.height_m = 10.0;
        spec.base_theta = std::uniform_real_distribution<double>(0.05, 0.5)(rng);
        spec.noise_sigma_raw = 20.0;
        spec.seed = rng();
        const Point2 p{pos(rng), pos(rng)};
        for (int k = static_cast<int>(rng() % 4); k > 0; --k) {
            spec.obstructions.push_back({{p.x + jitter(rng), p.y + jitter(rng)}, radius(rng)});
        }
        fieldsim::SimulatedField field(spec);
        fieldsim::VirtualSensor sensor(field);
        sensor.set_random_faults(0.35, rng());
        sampler::Actuator actuator;
        const auto out = sampler::attempt_point(Waypoint{run, p}, sensor, sdi12::Address('0'),
                                                actuator, field, cfg);
        const int n = static_cast<int>(out.attempts.size());
        worst_attempts = std::max(worst_attempts, n);
        violations += actuator.state.position_steps != 0 || n < 1 || n > cfg.max_attempts;
    }
    return {violations == 0, fmt("500 scenarios: violations=%d max attempts seen=%d (limit %d)",
                                 violations, worst_attempts, cfg.max_attempts)};
}

Verdict idw_properties() {
    std::mt19937_64 rng(6);
    std::uniform_real_distribution<double> u(0.0, 10.0), ut(0.05, 0.45);
    std::vector<geomap::LocalSample> samples;
    std::vector<oracle::IdwPoint> pts;
    for (int i = 0; i < 20; ++i) {
        samples.push_back({i + 1, {u(rng), u(rng)}, ut(rng)});
        pts.push_back({i + 1, samples.back().xy.x, samples.back().xy.y, samples.back().theta});
    }
    const geomap::IdwParams params;
    double exact_err = 0.0;
    double lo = 1.0, hi = 0.0;
    for (const auto& s : samples) {
        exact_err = std::max(exact_err, std::fabs(*geomap::idw_at(samples, s.xy, params) - s.theta));
        lo = std::min(lo, s.theta);
        hi = std::max(hi, s.theta);
    }
    const auto grid = geomap::build_grid(samples, {{0, 0}, {10, 10}}, params, 1.0);
    int out_of_bounds = 0, nodata_mismatch = 0;
    double oracle_err = 0.0;
    for (int j = 0; j < grid.ny; ++j) {
        for (int i = 0; i < grid.nx; ++i) {
            const auto& v = grid.at(i, j);
            const Point2 c = grid.cell_center(i, j);
            const auto expected = oracle::idw(pts, c.x, c.y, params.power, params.cutoff_radius_m,
                                              params.exact_radius_m);
            if (v.has_value() != expected.has_value()) {
                ++nodata_mismatch;
                continue;
            }
            if (v) {
                out_of_bounds += *v < lo || *v > hi;
                oracle_err = std::max(oracle_err, std::fabs(*v - *expected));
            }
        }
    }
    const bool ok = grid.nx == 10 && grid.ny == 10 && exact_err <= 1e-9 && out_of_bounds == 0 &&
                    nodata_mismatch == 0 && oracle_err <= 1e-12;
    return {ok, fmt("exactness err=%.1e (<=1e-9) out-of-bounds cells=%d oracle max diff=%.1e (<=1e-12) on %dx%d",
                    exact_err, out_of_bounds, oracle_err, grid.nx, grid.ny)};
}

Verdict field_recovery() {
    mission::MissionConfig cfg;
    cfg.field = fieldsim::default_field();
    cfg.field.noise_sigma_raw = 0.0;
    cfg.waypoints = mission::generate_waypoints(cfg.field, 100, 1.0, 4242);
    const auto result = mission::run_mission(cfg);
    const auto local = geomap::to_local(result.samples, cfg.field);
    const auto grid = geomap::build_grid(local, {{0, 0}, {cfg.field.width_m, cfg.field.height_m}});
    double sum = 0.0;
    int cells = 0;
    for (int j = 0; j < grid.ny; ++j) {
        for (int i = 0; i < grid.nx; ++i) {
            if (const auto& v = grid.at(i, j)) {
                const Point2 c = grid.cell_center(i, j);
                sum += std::fabs(*v - fieldsim::theta_true(cfg.field, c.x, c.y));
                ++cells;
            }
        }
    }
    const double mae = cells ? sum / cells : INFINITY;
    const bool ok = local.size() == 100 && mae <= 0.05;
    return {ok, fmt("valid samples=%zu cells=%d MAE=%.5f m3/m3 (<=0.05)", local.size(), cells, mae)};
}

struct PipelineArtifacts {
    std::string log, summary, valid, points, grid;
    bool operator==(const PipelineArtifacts&) const = default;
};

PipelineArtifacts run_pipeline() {
    const auto cfg = scenario::load_scenario(kFieldTrial);
    const auto result = mission::run_mission(cfg.mission);
    PipelineArtifacts a;
    std::ostringstream log, valid;
    write_sample_log(log, result.samples);
    a.log = log.str();
    a.summary = mission::summary_to_json(result.summary);
    const auto kept = valid_only(result.samples);
    write_sample_log(valid, kept);
    a.valid = valid.str();
    a.points = geomap::export_points_geojson(kept);
    const auto local = geomap::to_local(kept, cfg.mission.field);
    a.grid = geomap::export_grid_ascii(geomap::build_grid(
        local, {{0, 0}, {cfg.mission.field.width_m, cfg.mission.field.height_m}}, cfg.idw,
        cfg.cell_size_m));
    return a;
}

Verdict determinism() {
    const auto a = run_pipeline();
    const auto b = run_pipeline();
    return {a == b && !a.log.empty(),
            fmt("log %zu B, summary %zu B, points %zu B, grid %zu B identical across runs: %s",
                a.log.size(), a.summary.size(), a.points.size(), a.grid.size(),
                a == b ? "yes" : "no")};
}

} // namespace

int main() {
    const std::pair<const char*, Verdict (*)()> criteria[] = {
        {"1 field-trial-scenario reproduction", field_trial_scenario},
        {"2 calibration arithmetic", calibration_arithmetic},
        {"3 inverse-model consistency", inverse_model},
        {"4 codec round-trip and fuzz", codec_properties},
        {"5 sampler safety", fsm_safety},
        {"6 IDW properties", idw_properties},
        {"7 field-recovery quality", field_recovery},
        {"8 determinism", determinism},
    };
    int failures = 0;
    for (const auto& [name, check] : criteria) {
        Verdict v;
        try {
            v = check();
        } catch (const std::exception& e) {
            v = {false, std::string("threw: ") + e.what()};
        }
        failures += !v.pass;
        std::printf("[%s] %s: %s\n", v.pass ? "PASS" : "FAIL", name, v.detail.c_str());
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(std::size(criteria)) - failures,
                std::size(criteria));
    return failures == 0 ? 0 : 1;
}
