#include "dvpp/trace_io.hpp"

#include <bit>
#include <charconv>
#include <cstring>
#include <fstream>
#include <sstream>

#include "dvpp/config.hpp"
#include "dvpp/errors.hpp"

namespace dvpp {

using nlohmann::json;

namespace {

constexpr char kMagic[8] = {'D', 'V', 'P', 'P', 'T', 'R', 'C', '1'};

template <typename T>
void put(std::string& out, T value) {
    if constexpr (std::endian::native == std::endian::big) {
        unsigned char b[sizeof(T)];
        std::memcpy(b, &value, sizeof(T));
        for (std::size_t i = sizeof(T); i-- > 0;) out.push_back(static_cast<char>(b[i]));
    } else {
        out.append(reinterpret_cast<const char*>(&value), sizeof(T));
    }
}

template <typename T>
T get(std::string_view bytes, std::size_t& pos) {
    if (pos + sizeof(T) > bytes.size()) throw IoError("binary trace is truncated");
    T value;
    if constexpr (std::endian::native == std::endian::big) {
        unsigned char b[sizeof(T)];
        for (std::size_t i = 0; i < sizeof(T); ++i) b[sizeof(T) - 1 - i] = static_cast<unsigned char>(bytes[pos + i]);
        std::memcpy(&value, b, sizeof(T));
    } else {
        std::memcpy(&value, bytes.data() + pos, sizeof(T));
    }
    pos += sizeof(T);
    return value;
}

void append_number(std::string& out, double v) {
    char buf[32];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
    out.append(buf, end);
}

}  // namespace

std::string trace_to_csv(const SimulationTrace& trace) {
    std::string out;
    const auto& cols = trace.columns();
    for (std::size_t c = 0; c < cols.size(); ++c) {
        if (c) out.push_back(',');
        out += cols[c];
    }
    out.push_back('\n');
    out.reserve(out.size() + trace.values().size() * 22);
    for (std::size_t r = 0; r < trace.rows(); ++r) {
        const auto row = trace.row(r);
        for (std::size_t c = 0; c < row.size(); ++c) {
            if (c) out.push_back(',');
            append_number(out, row[c]);
        }
        out.push_back('\n');
    }
    return out;
}

SimulationTrace trace_from_csv(std::string_view text, TraceHeader header) {
    auto next_line = [&](std::size_t& pos) {
        const auto end = text.find('\n', pos);
        std::string_view line = text.substr(pos, end == std::string_view::npos ? text.size() - pos : end - pos);
        pos = end == std::string_view::npos ? text.size() : end + 1;
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        return line;
    };
    std::size_t pos = 0;
    const auto head = next_line(pos);
    if (head.empty()) throw IoError("CSV trace has no header line");
    std::vector<std::string> cols;
    for (std::size_t start = 0;;) {
        const auto comma = head.find(',', start);
        cols.emplace_back(head.substr(start, comma == std::string_view::npos ? head.size() - start : comma - start));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    SimulationTrace trace(std::move(header), cols);
    std::vector<double> row(cols.size());
    std::size_t line_no = 1;
    while (pos < text.size()) {
        const auto line = next_line(pos);
        ++line_no;
        if (line.empty()) continue;
        const char* p = line.data();
        const char* end = line.data() + line.size();
        for (std::size_t c = 0; c < cols.size(); ++c) {
            auto [ptr, ec] = std::from_chars(p, end, row[c]);
            if (ec != std::errc()) throw IoError("CSV trace: bad number on line " + std::to_string(line_no));
            p = ptr;
            if (c + 1 < cols.size()) {
                if (p == end || *p != ',') throw IoError("CSV trace: too few fields on line " + std::to_string(line_no));
                ++p;
            }
        }
        if (p != end) throw IoError("CSV trace: too many fields on line " + std::to_string(line_no));
        trace.append_row(row);
    }
    return trace;
}

std::string trace_to_binary(const SimulationTrace& trace) {
    std::string out(kMagic, sizeof kMagic);
    put<std::uint32_t>(out, static_cast<std::uint32_t>(trace.columns().size()));
    put<std::uint64_t>(out, static_cast<std::uint64_t>(trace.rows()));
    for (const auto& c : trace.columns()) {
        put<std::uint32_t>(out, static_cast<std::uint32_t>(c.size()));
        out += c;
    }
    out.reserve(out.size() + trace.values().size() * sizeof(double));
    for (double v : trace.values()) put<double>(out, v);
    return out;
}

SimulationTrace trace_from_binary(std::string_view bytes, TraceHeader header) {
    if (bytes.size() < sizeof kMagic || std::memcmp(bytes.data(), kMagic, sizeof kMagic) != 0)
        throw IoError("not a binary trace (bad magic)");
    std::size_t pos = sizeof kMagic;
    const auto ncols = get<std::uint32_t>(bytes, pos);
    const auto nrows = get<std::uint64_t>(bytes, pos);
    std::vector<std::string> cols;
    for (std::uint32_t c = 0; c < ncols; ++c) {
        const auto len = get<std::uint32_t>(bytes, pos);
        if (pos + len > bytes.size()) throw IoError("binary trace is truncated");
        cols.emplace_back(bytes.substr(pos, len));
        pos += len;
    }
    SimulationTrace trace(std::move(header), cols);
    trace.reserve_rows(nrows);
    std::vector<double> row(ncols);
    for (std::uint64_t r = 0; r < nrows; ++r) {
        for (auto& v : row) v = get<double>(bytes, pos);
        trace.append_row(row);
    }
    if (pos != bytes.size()) throw IoError("binary trace has trailing bytes");
    return trace;
}

json header_to_json(const TraceHeader& h, const ScenarioSpec* spec) {
    json cert = json::array();
    for (const auto& c : h.certification) {
        json eig = json::array();
        for (const auto& ev : c.eigen.eigenvalues) eig.push_back({ev.real(), ev.imag()});
        json p = json::array();
        for (Eigen::Index r = 0; r < c.lyapunov.p.rows(); ++r) {
            json row = json::array();
            for (Eigen::Index k = 0; k < c.lyapunov.p.cols(); ++k) row.push_back(c.lyapunov.p(r, k));
            p.push_back(std::move(row));
        }
        cert.push_back({{"node", c.node},
                        {"H", c.inertia},
                        {"certified", c.eigen.certified},
                        {"margin", c.eigen.margin},
                        {"eigenvalues", eig},
                        {"lyapunov", {{"certified", c.lyapunov.certified},
                                      {"solvable", c.lyapunov.solvable},
                                      {"min_eigenvalue", c.lyapunov.min_eigenvalue},
                                      {"P", p}}}});
    }
    json kinds = json::array();
    for (auto k : h.node_kinds) kinds.push_back(to_string(k));
    json j{{"format_version", 1},
           {"scenario", h.scenario},
           {"config_hash", h.config_hash},
           {"seed", h.seed},
           {"rng_algorithm", h.rng_algorithm},
           {"dt", h.dt},
           {"decimation", h.decimation},
           {"nodes", h.nodes},
           {"node_kinds", kinds},
           {"certification_method", "eigenvalues of A - kappa C; Lyapunov equation with Q = I"},
           {"certification", cert}};
    if (spec) j["config"] = scenario_to_json(*spec);
    return j;
}

TraceHeader header_from_json(const json& j) {
    TraceHeader h;
    try {
        h.scenario = j.at("scenario").get<std::string>();
        h.config_hash = j.at("config_hash").get<std::string>();
        h.seed = j.at("seed").get<std::uint64_t>();
        h.rng_algorithm = j.at("rng_algorithm").get<std::string>();
        h.dt = j.at("dt").get<double>();
        h.decimation = j.at("decimation").get<std::size_t>();
        h.nodes = j.at("nodes").get<std::vector<NodeId>>();
        for (const auto& k : j.at("node_kinds")) h.node_kinds.push_back(k.get<std::string>() == "sg" ? NodeKind::Sg : NodeKind::Dvpp);
        for (const auto& c : j.at("certification")) {
            NodeCertification nc;
            nc.node = c.at("node").get<NodeId>();
            nc.inertia = c.at("H").get<double>();
            nc.eigen.certified = c.at("certified").get<bool>();
            nc.eigen.margin = c.at("margin").get<double>();
            for (const auto& ev : c.at("eigenvalues"))
                nc.eigen.eigenvalues.emplace_back(ev.at(0).get<double>(), ev.at(1).get<double>());
            const auto& ly = c.at("lyapunov");
            nc.lyapunov.certified = ly.at("certified").get<bool>();
            nc.lyapunov.solvable = ly.at("solvable").get<bool>();
            nc.lyapunov.min_eigenvalue = ly.at("min_eigenvalue").get<double>();
            h.certification.push_back(std::move(nc));
        }
    } catch (const json::exception& e) {
        throw IoError(std::string("malformed trace header: ") + e.what());
    }
    return h;
}

void write_text_file(const std::filesystem::path& path, std::string_view content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw IoError("failed writing " + path.string());
}

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::filesystem::path write_trace(const SimulationTrace& trace, const ScenarioSpec& spec,
                                  const std::filesystem::path& dir, TraceFormat format) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw IoError("cannot create output directory " + dir.string() + ": " + ec.message());
    const auto file = dir / (format == TraceFormat::Csv ? "trace.csv" : "trace.bin");
    write_text_file(file, format == TraceFormat::Csv ? trace_to_csv(trace) : trace_to_binary(trace));
    auto header = header_to_json(trace.header(), &spec);
    header["columns"] = trace.columns();
    header["format"] = format == TraceFormat::Csv ? "csv" : "binary";
    write_text_file(dir / "trace.header.json", header.dump(2) + "\n");
    return file;
}

SimulationTrace read_trace(const std::filesystem::path& trace_file) {
    const auto sidecar = trace_file.parent_path() / "trace.header.json";
    json hj;
    try {
        hj = json::parse(read_text_file(sidecar));
    } catch (const json::parse_error& e) {
        throw IoError("malformed trace header " + sidecar.string() + ": " + e.what());
    }
    auto header = header_from_json(hj);
    const auto bytes = read_text_file(trace_file);
    if (bytes.size() >= sizeof kMagic && std::memcmp(bytes.data(), kMagic, sizeof kMagic) == 0)
        return trace_from_binary(bytes, std::move(header));
    return trace_from_csv(bytes, std::move(header));
}

std::string trace_digest(const SimulationTrace& trace) {
    return hex_digest(fnv1a64(trace_to_binary(trace)));
}

json metrics_to_json(const Metrics& m) {
    json nodes = json::array();
    for (const auto& n : m.nodes)
        nodes.push_back({{"node", n.node},
                         {"omega", n.omega},
                         {"omega_hat", n.omega_hat},
                         {"p_unmeas", n.p_unmeas},
                         {"p_unmeas_hat", n.p_unmeas_hat},
                         {"u_star", n.u_star},
                         {"u_m", n.u_m},
                         {"u_delta", n.u_delta},
                         {"tie", n.tie},
                         {"p_m", n.p_m},
                         {"settling_time", n.settling_time}});
    return json{{"final_state", nodes},
                {"rms_rocof_mean_frequency", m.rms_mean_rocof},
                {"rocof_window", {m.window_start, m.window_end}},
                {"final_mean_omega", m.mean_omega.empty() ? 0.0 : m.mean_omega.back()}};
}

}  // namespace dvpp
