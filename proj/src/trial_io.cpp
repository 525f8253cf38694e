#include "comanip/trial_io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <optional>
#include <string_view>

#include "json.hpp"

#include "comanip/csv.hpp"

namespace comanip::io {

namespace {

using nlohmann::json;

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Numeric fields written as null (the JSON encoding of NaN) decode to NaN so
// the finite check can name the offending field and row.
double get_num(const json& j) {
    if (j.is_null()) return kNaN;
    return j.get<double>();
}

double checked_num(const json& j, const char* field, std::size_t row) {
    const double v = get_num(j);
    if (!std::isfinite(v)) {
        throw_error(Errc::Validation, std::string("non-finite '") + field + "' at sample row " +
                                          std::to_string(row));
    }
    return v;
}

CartesianVector read_vec(const json& j, Unit unit, const char* field, std::size_t row) {
    if (!j.is_array() || j.size() != 3) {
        throw_error(Errc::Parse, std::string("'") + field + "' must be a 3-element array (row " +
                                     std::to_string(row) + ")");
    }
    const double x = checked_num(j[0], field, row);
    const double y = checked_num(j[1], field, row);
    const double z = checked_num(j[2], field, row);
    return {x, y, z, unit};
}

void append_vec(std::string& out, const CartesianVector& v) {
    out += '[';
    out += format_double(v.x);
    out += ',';
    out += format_double(v.y);
    out += ',';
    out += format_double(v.z);
    out += ']';
}

std::string json_string(const std::string& s) { return json(s).dump(); }

TrialMeta parse_meta(const std::string& line, const std::filesystem::path& path) {
    json j;
    try {
        j = json::parse(line);
    } catch (const json::exception& e) {
        throw_error(Errc::Parse, "malformed meta line (line 1) in " + path.string() + ": " +
                                     e.what());
    }
    if (!j.contains("schema") || !j["schema"].is_number_integer()) {
        throw_error(Errc::Parse, "meta line lacks an integer 'schema' field");
    }
    TrialMeta meta;
    meta.schema = j["schema"].get<int>();
    if (meta.schema != 1) {
        throw_error(Errc::Version,
                    "unknown trial schema version " + std::to_string(meta.schema));
    }
    try {
        meta.study_label = j.value("study_label", std::string());
        meta.trial_id = j.value("trial_id", std::string());
        meta.sample_rate_hz = j.at("sample_rate_hz").get<double>();
        if (j.contains("mass_kg")) meta.mass_kg = j["mass_kg"].get<double>();
        if (j.contains("inertia_z")) meta.inertia_z = j["inertia_z"].get<double>();
        if (j.contains("gravity_axis")) {
            meta.gravity_axis = read_vec(j["gravity_axis"], Unit::Position, "gravity_axis", 0);
        }
        for (const auto& a : j.at("agents")) {
            AgentMeta am;
            am.id = a.at("id").get<std::string>();
            if (a.contains("grasp_offset_body_frame")) {
                am.grasp_offset_body =
                    read_vec(a["grasp_offset_body_frame"], Unit::Position, "grasp_offset", 0);
            }
            meta.agents.push_back(std::move(am));
        }
    } catch (const json::exception& e) {
        throw_error(Errc::Parse, "invalid meta line in " + path.string() + ": " + e.what());
    }
    return meta;
}

// Fast scanner for the common sample-line shape: a flat object of known keys
// whose values are numbers, nulls, or (nested) arrays of numbers. Returns
// false on anything unexpected, in which case the caller re-parses the line
// with the full JSON parser for a precise diagnostic.
class SampleScanner {
public:
    SampleScanner(const char* p, const char* end) : p_(p), end_(end) {}

    bool parse(TrialSample& s, std::size_t n_agents) {
        bool saw_t = false, saw_pos = false, saw_yaw = false;
        skip_ws();
        if (!consume('{')) return false;
        bool first = true;
        while (true) {
            skip_ws();
            if (consume('}')) break;
            if (!first && !consume(',')) return false;
            first = false;
            skip_ws();
            std::string_view key;
            if (!parse_key(key)) return false;
            skip_ws();
            if (!consume(':')) return false;
            skip_ws();
            if (key == "t") {
                if (!parse_num(s.t)) return false;
                saw_t = true;
            } else if (key == "yaw") {
                if (!parse_num(s.yaw)) return false;
                saw_yaw = true;
            } else if (key == "yaw_rate") {
                double v;
                if (!parse_num(v)) return false;
                s.yaw_rate = v;
            } else if (key == "f") {
                if (!parse_wrenches(s.force, n_agents, Unit::Force)) return false;
            } else if (key == "tau") {
                if (!parse_wrenches(s.torque, n_agents, Unit::Torque)) return false;
            } else if (key == "pos") {
                if (!parse_vec(s.pos, Unit::Position)) return false;
                saw_pos = true;
            } else if (key == "vel") {
                CartesianVector v = CartesianVector::zero(Unit::Velocity);
                if (!parse_vec(v, Unit::Velocity)) return false;
                s.vel = v;
            } else if (key == "acc") {
                CartesianVector v = CartesianVector::zero(Unit::Acceleration);
                if (!parse_vec(v, Unit::Acceleration)) return false;
                s.acc = v;
            } else if (key == "f_net") {
                CartesianVector v = CartesianVector::zero(Unit::Force);
                if (!parse_vec(v, Unit::Force)) return false;
                s.f_net = v;
            } else if (key == "tau_net") {
                CartesianVector v = CartesianVector::zero(Unit::Torque);
                if (!parse_vec(v, Unit::Torque)) return false;
                s.tau_net = v;
            } else {
                return false; // unknown key: let the full parser decide
            }
        }
        skip_ws();
        return p_ == end_ && saw_t && saw_pos && saw_yaw;
    }

private:
    void skip_ws() {
        while (p_ != end_ && (*p_ == ' ' || *p_ == '\t' || *p_ == '\r')) ++p_;
    }
    bool consume(char c) {
        if (p_ != end_ && *p_ == c) {
            ++p_;
            return true;
        }
        return false;
    }
    bool parse_key(std::string_view& out) {
        if (!consume('"')) return false;
        const char* start = p_;
        while (p_ != end_ && *p_ != '"') {
            if (*p_ == '\\') return false; // escapes: fall back
            ++p_;
        }
        if (p_ == end_) return false;
        out = std::string_view(start, static_cast<std::size_t>(p_ - start));
        ++p_;
        return true;
    }
    bool parse_num(double& out) {
        if (end_ - p_ >= 4 && std::string_view(p_, 4) == "null") {
            out = kNaN;
            p_ += 4;
            return true;
        }
        const auto res = std::from_chars(p_, end_, out);
        if (res.ec != std::errc{}) return false;
        p_ = res.ptr;
        return true;
    }
    bool parse_triple(double& x, double& y, double& z) {
        skip_ws();
        if (!consume('[')) return false;
        skip_ws();
        if (!parse_num(x)) return false;
        skip_ws();
        if (!consume(',')) return false;
        skip_ws();
        if (!parse_num(y)) return false;
        skip_ws();
        if (!consume(',')) return false;
        skip_ws();
        if (!parse_num(z)) return false;
        skip_ws();
        return consume(']');
    }
    bool parse_vec(CartesianVector& out, Unit unit) {
        double x, y, z;
        if (!parse_triple(x, y, z)) return false;
        if (!(std::isfinite(x) && std::isfinite(y) && std::isfinite(z))) return false;
        out = CartesianVector(x, y, z, unit);
        return true;
    }
    bool parse_wrenches(std::vector<CartesianVector>& out, std::size_t n_agents, Unit unit) {
        skip_ws();
        if (!consume('[')) return false;
        out.clear();
        out.reserve(n_agents);
        for (std::size_t a = 0; a < n_agents; ++a) {
            if (a) {
                skip_ws();
                if (!consume(',')) return false;
            }
            CartesianVector v = CartesianVector::zero(unit);
            if (!parse_vec(v, unit)) return false;
            out.push_back(v);
        }
        skip_ws();
        return consume(']');
    }

    const char* p_;
    const char* end_;
};

TrialSample parse_sample(const std::string& line, std::size_t row, std::size_t n_agents,
                         std::size_t line_no, const std::filesystem::path& path) {
    json j;
    try {
        j = json::parse(line);
    } catch (const json::exception& e) {
        throw_error(Errc::Parse, "malformed sample (line " + std::to_string(line_no) + ") in " +
                                     path.string() + ": " + e.what());
    }
    TrialSample s;
    try {
        s.t = checked_num(j.at("t"), "t", row);
        const json& f = j.at("f");
        const json& tau = j.at("tau");
        if (!f.is_array() || !tau.is_array() || f.size() != n_agents || tau.size() != n_agents) {
            throw_error(Errc::Validation, "sample row " + std::to_string(row) +
                                              " carries wrenches for " + std::to_string(f.size()) +
                                              " agents, meta declares " + std::to_string(n_agents));
        }
        s.force.reserve(n_agents);
        s.torque.reserve(n_agents);
        for (std::size_t a = 0; a < n_agents; ++a) {
            s.force.push_back(read_vec(f[a], Unit::Force, "f", row));
            s.torque.push_back(read_vec(tau[a], Unit::Torque, "tau", row));
        }
        s.pos = read_vec(j.at("pos"), Unit::Position, "pos", row);
        s.yaw = checked_num(j.at("yaw"), "yaw", row);
        if (j.contains("vel")) s.vel = read_vec(j["vel"], Unit::Velocity, "vel", row);
        if (j.contains("acc")) s.acc = read_vec(j["acc"], Unit::Acceleration, "acc", row);
        if (j.contains("yaw_rate")) s.yaw_rate = checked_num(j["yaw_rate"], "yaw_rate", row);
        if (j.contains("f_net")) s.f_net = read_vec(j["f_net"], Unit::Force, "f_net", row);
        if (j.contains("tau_net")) s.tau_net = read_vec(j["tau_net"], Unit::Torque, "tau_net", row);
    } catch (const json::exception& e) {
        throw_error(Errc::Parse, "invalid sample (line " + std::to_string(line_no) + ") in " +
                                     path.string() + ": " + e.what());
    }
    return s;
}

} // namespace

TrialRecord read_trial(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw_error(Errc::Io, "cannot open trial file: " + path.string());
    }
    std::string line;
    if (!std::getline(in, line)) {
        throw_error(Errc::Parse, "empty trial file: " + path.string());
    }

    TrialRecord record;
    record.meta = parse_meta(line, path);
    const std::size_t n_agents = record.meta.agents.size();

    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        TrialSample fast;
        SampleScanner scanner(line.data(), line.data() + line.size());
        if (scanner.parse(fast, n_agents) && fast.force.size() == n_agents &&
            fast.torque.size() == n_agents) {
            record.samples.push_back(std::move(fast));
        } else {
            record.samples.push_back(
                parse_sample(line, record.samples.size(), n_agents, line_no, path));
        }
    }
    record.validate();
    return record;
}

void write_trial(const TrialRecord& record, const std::filesystem::path& path) {
    record.validate();

    std::string meta = "{\"schema\":1";
    meta += ",\"study_label\":" + json_string(record.meta.study_label);
    meta += ",\"trial_id\":" + json_string(record.meta.trial_id);
    meta += ",\"sample_rate_hz\":" + format_double(record.meta.sample_rate_hz);
    if (record.meta.mass_kg) meta += ",\"mass_kg\":" + format_double(*record.meta.mass_kg);
    if (record.meta.inertia_z) meta += ",\"inertia_z\":" + format_double(*record.meta.inertia_z);
    meta += ",\"gravity_axis\":";
    append_vec(meta, record.meta.gravity_axis);
    meta += ",\"agents\":[";
    for (std::size_t a = 0; a < record.meta.agents.size(); ++a) {
        if (a) meta += ',';
        meta += "{\"id\":" + json_string(record.meta.agents[a].id);
        if (record.meta.agents[a].grasp_offset_body) {
            meta += ",\"grasp_offset_body_frame\":";
            append_vec(meta, *record.meta.agents[a].grasp_offset_body);
        }
        meta += '}';
    }
    meta += "]}\n";

    const std::filesystem::path tmp = path.string() + ".tmp";
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw_error(Errc::Io, "cannot open for writing: " + tmp.string());
    }
    out.write(meta.data(), static_cast<std::streamsize>(meta.size()));

    std::string buf;
    for (const TrialSample& s : record.samples) {
        buf.clear();
        buf += "{\"t\":";
        buf += format_double(s.t);
        buf += ",\"f\":[";
        for (std::size_t a = 0; a < s.force.size(); ++a) {
            if (a) buf += ',';
            append_vec(buf, s.force[a]);
        }
        buf += "],\"tau\":[";
        for (std::size_t a = 0; a < s.torque.size(); ++a) {
            if (a) buf += ',';
            append_vec(buf, s.torque[a]);
        }
        buf += "],\"pos\":";
        append_vec(buf, s.pos);
        buf += ",\"yaw\":";
        buf += format_double(s.yaw);
        if (s.vel) {
            buf += ",\"vel\":";
            append_vec(buf, *s.vel);
        }
        if (s.acc) {
            buf += ",\"acc\":";
            append_vec(buf, *s.acc);
        }
        if (s.yaw_rate) {
            buf += ",\"yaw_rate\":";
            buf += format_double(*s.yaw_rate);
        }
        if (s.f_net) {
            buf += ",\"f_net\":";
            append_vec(buf, *s.f_net);
        }
        if (s.tau_net) {
            buf += ",\"tau_net\":";
            append_vec(buf, *s.tau_net);
        }
        buf += "}\n";
        out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
    }
    out.flush();
    if (!out) {
        throw_error(Errc::Io, "write failed: " + tmp.string());
    }
    out.close();

    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        throw_error(Errc::Io, "rename failed for " + path.string() + ": " + ec.message());
    }
}

} // namespace comanip::io
