#include "agrione/cli.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "agrione/error.hpp"
#include "agrione/geomap.hpp"
#include "agrione/mission.hpp"
#include "agrione/scenario.hpp"
#include "agrione/sdi12.hpp"

namespace agrione::cli {

namespace {

class IoError : public Error {
public:
    using Error::Error;
};

void write_text(const std::string& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary);
    if (!f || !(f << text) || !f.flush()) {
        throw IoError("cannot write " + path);
    }
}

// Writes to the file when a path is given, otherwise to out.
void emit(const std::optional<std::string>& path, const std::string& text, std::ostream& out) {
    if (path) {
        write_text(*path, text);
    } else {
        out << text;
    }
}

std::vector<SoilSample> load_log(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open log " + path);
    }
    return read_sample_log(in);
}

std::string hex_bytes(std::string_view bytes) {
    std::string out;
    char buf[4];
    for (unsigned char c : bytes) {
        std::snprintf(buf, sizeof buf, "%02X", c);
        out += buf;
    }
    return out;
}

std::optional<std::string> decode_hex(std::string_view hex) {
    std::string digits;
    for (char c : hex) {
        if (c != ' ' && c != ':') {
            digits += c;
        }
    }
    if (digits.size() % 2 != 0) {
        return std::nullopt;
    }
    std::string out;
    for (std::size_t i = 0; i < digits.size(); i += 2) {
        unsigned value = 0;
        for (char c : digits.substr(i, 2)) {
            value <<= 4;
            if (c >= '0' && c <= '9') {
                value |= static_cast<unsigned>(c - '0');
            } else if (c >= 'a' && c <= 'f') {
                value |= static_cast<unsigned>(c - 'a' + 10);
            } else if (c >= 'A' && c <= 'F') {
                value |= static_cast<unsigned>(c - 'A' + 10);
            } else {
                return std::nullopt;
            }
        }
        out += static_cast<char>(value);
    }
    return out;
}

std::string_view verb_name(sdi12::Verb v) {
    switch (v) {
    case sdi12::Verb::AddressQuery: return "AddressQuery";
    case sdi12::Verb::Acknowledge: return "Acknowledge";
    case sdi12::Verb::Identify: return "Identify";
    case sdi12::Verb::StartMeasurement: return "StartMeasurement";
    case sdi12::Verb::SendData: return "SendData";
    }
    return "?";
}

std::string describe_frame(std::string_view frame) {
    nlohmann::ordered_json j;
    if (!frame.empty() && frame.back() == '!') {
        const auto cmd = sdi12::parse_command(frame);
        j["frame"] = "command";
        j["verb"] = verb_name(cmd.verb());
        if (cmd.address()) {
            j["address"] = std::string(1, cmd.address()->value());
        }
        if (cmd.verb() == sdi12::Verb::SendData) {
            j["index"] = cmd.data_index();
        }
        return j.dump();
    }
    // Seven bytes without any value sign can only be an "atttn" acknowledgement.
    const bool ack_shaped = frame.size() == 7 && frame.find_first_of("+-") == std::string_view::npos;
    if (ack_shaped) {
        const auto ack = sdi12::parse_measure_ack(frame);
        j["frame"] = "measure_ack";
        j["address"] = std::string(1, ack.address.value());
        j["delay_s"] = ack.delay_s;
        j["value_count"] = ack.value_count;
        return j.dump();
    }
    const auto data = sdi12::parse_data_response(frame);
    j["frame"] = "data";
    j["address"] = std::string(1, data.address.value());
    j["values"] = data.values;
    return j.dump();
}

// Local frame anchored at the south-west corner of the logged points.
fieldsim::FieldSpec frame_from_log(std::span<const SoilSample> samples) {
    fieldsim::FieldSpec frame;
    frame.origin_lat = samples.front().lat;
    frame.origin_lon = samples.front().lon;
    for (const auto& s : samples) {
        frame.origin_lat = std::min(frame.origin_lat, s.lat);
        frame.origin_lon = std::min(frame.origin_lon, s.lon);
    }
    return frame;
}

} // namespace

int cmd_simulate(const SimulateOptions& opt, std::ostream& out, std::ostream& err) {
    scenario::ScenarioConfig cfg;
    try {
        cfg = scenario::load_scenario(opt.config);
        if (opt.seed) {
            cfg.mission.field.seed = *opt.seed;
        }
    } catch (const Error& e) {
        err << "config error: " << e.what() << '\n';
        return kConfigError;
    }
    try {
        const auto result = mission::run_mission(cfg.mission);
        std::ostringstream log;
        write_sample_log(log, result.samples);
        const std::string summary = mission::summary_to_json(result.summary) + "\n";
        emit(opt.out_log, log.str(), out);
        emit(opt.out_summary, summary, out);
        err << "summary: " << summary;
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << '\n';
        return kConfigError;
    } catch (const IoError& e) {
        err << e.what() << '\n';
        return kIoError;
    }
    return kOk;
}

int cmd_validate(const ValidateOptions& opt, std::ostream& out, std::ostream& err) {
    std::vector<SoilSample> samples;
    try {
        samples = load_log(opt.log);
    } catch (const LogFormatError& e) {
        err << opt.log << ":" << e.line() << ": malformed record: " << e.what() << '\n';
        return kMalformedLog;
    } catch (const IoError& e) {
        err << e.what() << '\n';
        return kIoError;
    }
    nlohmann::ordered_json counts;
    counts["total"] = samples.size();
    for (auto v : {calib::Validity::Valid, calib::Validity::NotPenetrated, calib::Validity::SensorError}) {
        counts[std::string(calib::to_string(v))] =
            std::count_if(samples.begin(), samples.end(), [v](const auto& s) { return s.status == v; });
    }
    err << "counts: " << counts.dump() << '\n';

    std::ostringstream valid;
    write_sample_log(valid, valid_only(samples));
    try {
        emit(opt.out, valid.str(), out);
    } catch (const IoError& e) {
        err << e.what() << '\n';
        return kIoError;
    }
    return kOk;
}

int cmd_map(const MapOptions& opt, std::ostream& out, std::ostream& err) {
    std::vector<SoilSample> samples;
    try {
        samples = load_log(opt.log);
    } catch (const LogFormatError& e) {
        err << opt.log << ":" << e.line() << ": malformed record: " << e.what() << '\n';
        return kMalformedLog;
    } catch (const IoError& e) {
        err << e.what() << '\n';
        return kIoError;
    }
    if (valid_only(samples).empty()) {
        err << "no Valid samples to map\n";
        return kNoValidSamples;
    }

    geomap::IdwParams idw;
    double cell_size = 0.5;
    fieldsim::FieldSpec frame;
    geomap::Bounds bounds;
    try {
        if (opt.config) {
            const auto cfg = scenario::load_scenario(*opt.config);
            idw = cfg.idw;
            cell_size = cfg.cell_size_m;
            frame = cfg.mission.field;
            bounds = {{0.0, 0.0}, {frame.width_m, frame.height_m}};
        } else {
            frame = frame_from_log(samples);
            for (const auto& s : samples) {
                const Point2 p = fieldsim::wgs84_to_local(frame, s.lat, s.lon);
                bounds.max.x = std::max(bounds.max.x, p.x);
                bounds.max.y = std::max(bounds.max.y, p.y);
            }
        }
        if (opt.cell_size) {
            cell_size = *opt.cell_size;
        }
        if (opt.power) {
            idw.power = *opt.power;
        }
        idw.validate();
        if (!(cell_size > 0.0)) {
            throw ConfigError("cell size must be > 0");
        }
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << '\n';
        return kConfigError;
    }

    const auto local = geomap::to_local(samples, frame);
    const auto grid = geomap::build_grid(local, bounds, idw, cell_size);
    try {
        emit(opt.out_points, geomap::export_points_geojson(samples), out);
        emit(opt.out_grid, geomap::export_grid_ascii(grid), out);
    } catch (const IoError& e) {
        err << e.what() << '\n';
        return kIoError;
    }
    err << "mapped " << local.size() << " Valid of " << samples.size() << " samples onto "
        << grid.nx << "x" << grid.ny << " cells\n";
    return kOk;
}

int cmd_codec(const CodecOptions& opt, std::ostream& out, std::ostream& err) {
    if (opt.parse_hex.has_value() == opt.encode.has_value()) {
        err << "codec needs exactly one of --parse or --encode\n";
        return kUsage;
    }
    try {
        if (opt.parse_hex) {
            const auto bytes = decode_hex(*opt.parse_hex);
            if (!bytes) {
                err << "--parse expects an even number of hex digits\n";
                return kUsage;
            }
            out << describe_frame(*bytes) << '\n';
        } else {
            std::string text = *opt.encode;
            if (text.empty() || text.back() != '!') {
                text += '!';
            }
            const std::string bytes = sdi12::encode_command(sdi12::parse_command(text));
            out << bytes << '\n' << hex_bytes(bytes) << '\n';
        }
    } catch (const FrameError& e) {
        err << "frame error at byte " << e.position() << ": " << e.what() << '\n';
        return kFrameError;
    }
    return kOk;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"AgriOne soil-moisture pipeline: simulate, validate, map, codec"};
    app.require_subcommand(1);

    SimulateOptions sim;
    std::uint64_t seed = 0;
    auto* simulate = app.add_subcommand("simulate", "Run a simulated sampling mission");
    simulate->add_option("--config", sim.config, "Scenario JSON")->required();
    auto* out_log = simulate->add_option("--out-log", "Sample log (.jsonl)");
    auto* out_summary = simulate->add_option("--out-summary", "Mission summary (.json)");
    auto* seed_opt = simulate->add_option("--seed", seed, "Override the field seed");

    ValidateOptions val;
    auto* validate = app.add_subcommand("validate", "Count samples by status, keep the Valid ones");
    validate->add_option("--log", val.log, "Sample log")->required();
    auto* val_out = validate->add_option("--out", "Valid-only sample log");

    MapOptions map;
    double cell_size = 0.0;
    double power = 0.0;
    auto* mapcmd = app.add_subcommand("map", "Interpolate Valid samples into point and grid layers");
    mapcmd->add_option("--log", map.log, "Sample log")->required();
    auto* out_points = mapcmd->add_option("--out-points", "GeoJSON points");
    auto* out_grid = mapcmd->add_option("--out-grid", "ESRI ASCII grid");
    auto* cell_opt = mapcmd->add_option("--cell-size", cell_size, "Cell size in metres");
    auto* power_opt = mapcmd->add_option("--power", power, "IDW power");
    auto* map_config = mapcmd->add_option("--config", "Scenario JSON giving the field frame");

    CodecOptions codec;
    auto* codeccmd = app.add_subcommand("codec", "Decode or encode a single SDI-12 frame");
    auto* parse_opt = codeccmd->add_option("--parse", "Frame bytes as hex");
    auto* encode_opt = codeccmd->add_option("--encode", "Command text, e.g. 0M or 0D0");
    parse_opt->excludes(encode_opt);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kUsage;
    }

    const auto optional_string = [](CLI::Option* o) -> std::optional<std::string> {
        if (o->count() == 0) {
            return std::nullopt;
        }
        return o->as<std::string>();
    };

    if (*simulate) {
        sim.out_log = optional_string(out_log);
        sim.out_summary = optional_string(out_summary);
        if (seed_opt->count() > 0) {
            sim.seed = seed;
        }
        return cmd_simulate(sim, out, err);
    }
    if (*validate) {
        val.out = optional_string(val_out);
        return cmd_validate(val, out, err);
    }
    if (*mapcmd) {
        map.out_points = optional_string(out_points);
        map.out_grid = optional_string(out_grid);
        map.config = optional_string(map_config);
        if (cell_opt->count() > 0) {
            map.cell_size = cell_size;
        }
        if (power_opt->count() > 0) {
            map.power = power;
        }
        return cmd_map(map, out, err);
    }
    codec.parse_hex = optional_string(parse_opt);
    codec.encode = optional_string(encode_opt);
    return cmd_codec(codec, out, err);
}

} // namespace agrione::cli
