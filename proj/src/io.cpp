#include "ymflow/io.hpp"

#include <cctype>
#include <cstring>
#include <fstream>
#include <memory>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

#include "json.hpp"

namespace ymflow {

namespace {

// Geometries referenced by loaded fields must outlive them; keep them in a
// process-lifetime pool keyed by their parameters.
const LatticeGeometry* pooled_geometry(const std::array<int, 4>& dims, BoundaryMode low,
                                       BoundaryMode high, int frozen_depth,
                                       const std::array<int, 3>& twist) {
    static std::vector<std::unique_ptr<LatticeGeometry>> pool;
    for (const auto& g : pool) {
        if (g->dims() == dims && g->low_mode() == low && g->high_mode() == high &&
            g->frozen_depth() == frozen_depth && g->twist() == twist)
            return g.get();
    }
    pool.push_back(std::make_unique<LatticeGeometry>(dims, low, high, frozen_depth, twist));
    return pool.back().get();
}

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

[[noreturn]] void bad_key(int line, const std::string& key) {
    throw std::invalid_argument("unknown config key '" + key + "' at line " +
                                std::to_string(line));
}

[[noreturn]] void bad_value(int line, const std::string& key) {
    throw std::invalid_argument("bad value for '" + key + "' at line " + std::to_string(line));
}

double to_double(const std::string& v, int line, const std::string& key) {
    try {
        size_t pos = 0;
        double d = std::stod(v, &pos);
        if (pos != v.size()) bad_value(line, key);
        return d;
    } catch (const std::invalid_argument&) {
        bad_value(line, key);
    } catch (const std::out_of_range&) {
        bad_value(line, key);
    }
}

long to_long(const std::string& v, int line, const std::string& key) {
    try {
        size_t pos = 0;
        long d = std::stol(v, &pos);
        if (pos != v.size()) bad_value(line, key);
        return d;
    } catch (const std::invalid_argument&) {
        bad_value(line, key);
    } catch (const std::out_of_range&) {
        bad_value(line, key);
    }
}

// --- little-endian binary helpers --------------------------------------

bool host_is_little_endian() {
    const std::uint32_t probe = 1;
    unsigned char b;
    std::memcpy(&b, &probe, 1);
    return b == 1;
}

template <typename T>
void put_le(std::ostream& out, T value) {
    unsigned char buf[sizeof(T)];
    std::memcpy(buf, &value, sizeof(T));
    if (!host_is_little_endian())
        for (size_t i = 0; i < sizeof(T) / 2; ++i) std::swap(buf[i], buf[sizeof(T) - 1 - i]);
    out.write(reinterpret_cast<const char*>(buf), sizeof(T));
}

template <typename T>
T get_le(std::istream& in) {
    unsigned char buf[sizeof(T)];
    in.read(reinterpret_cast<char*>(buf), sizeof(T));
    if (!in) throw std::runtime_error("truncated snapshot");
    if (!host_is_little_endian())
        for (size_t i = 0; i < sizeof(T) / 2; ++i) std::swap(buf[i], buf[sizeof(T) - 1 - i]);
    T value;
    std::memcpy(&value, buf, sizeof(T));
    return value;
}

std::string fmt(double x) {
    std::ostringstream os;
    os.precision(17);
    os << x;
    return os.str();
}

} // namespace

LatticeGeometry RunConfig::make_geometry() const {
    return LatticeGeometry(dims, low, high, frozen_depth, twist);
}

PerturbationSpec RunConfig::make_perturbation() const {
    PerturbationSpec spec;
    spec.beta = beta;
    spec.w0 = w0;
    return spec;
}

RunConfig parse_config(std::istream& in) {
    RunConfig cfg;
    std::string line, section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        size_t hash = line.find_first_of("#;");
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw std::invalid_argument("malformed section at line " + std::to_string(lineno));
            section = trim(line.substr(1, line.size() - 2));
            if (section != "lattice" && section != "perturbation" && section != "flow" &&
                section != "run")
                throw std::invalid_argument("unknown config section '" + section + "' at line " +
                                            std::to_string(lineno));
            continue;
        }
        size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("expected key=value at line " + std::to_string(lineno));
        std::string key = trim(line.substr(0, eq));
        std::string val = trim(line.substr(eq + 1));
        std::string full = section.empty() ? key : section + "." + key;

        if (full == "lattice.dims") {
            std::istringstream vs(val);
            std::array<int, 4> d{};
            char sep = 'x';
            if (!(vs >> d[0] >> sep >> d[1] >> sep >> d[2] >> sep >> d[3])) bad_value(lineno, full);
            cfg.dims = d;
        } else if (full == "lattice.boundary") {
            if (val == "frozen") { cfg.low = cfg.high = BoundaryMode::Frozen; }
            else if (val == "free") { cfg.low = cfg.high = BoundaryMode::Free; }
            else if (val == "frozen-free") { cfg.low = BoundaryMode::Frozen; cfg.high = BoundaryMode::Free; }
            else if (val == "free-frozen") { cfg.low = BoundaryMode::Free; cfg.high = BoundaryMode::Frozen; }
            else bad_value(lineno, full);
        } else if (full == "lattice.frozen_depth") {
            cfg.frozen_depth = static_cast<int>(to_long(val, lineno, full));
        } else if (full == "lattice.twist") {
            if (val.size() != 3 || val.find_first_not_of("01") != std::string::npos)
                bad_value(lineno, full);
            cfg.twist = {val[0] - '0', val[1] - '0', val[2] - '0'};
        } else if (full == "perturbation.beta") {
            cfg.beta = to_double(val, lineno, full);
        } else if (full == "perturbation.w0") {
            cfg.w0 = to_double(val, lineno, full);
        } else if (full == "flow.dtau") {
            cfg.schedule.dtau = to_double(val, lineno, full);
        } else if (full == "flow.tau_max") {
            cfg.schedule.tau_max = to_double(val, lineno, full);
        } else if (full == "flow.integrator") {
            if (val == "euler") cfg.schedule.integrator = Integrator::Euler;
            else if (val == "rk3") cfg.schedule.integrator = Integrator::RK3;
            else bad_value(lineno, full);
        } else if (full == "flow.adaptive") {
            if (val == "true" || val == "1") cfg.schedule.adaptive = true;
            else if (val == "false" || val == "0") cfg.schedule.adaptive = false;
            else bad_value(lineno, full);
        } else if (full == "flow.sample_every") {
            cfg.schedule.sample_every = static_cast<int>(to_long(val, lineno, full));
        } else if (full == "flow.snapshot_every") {
            cfg.schedule.snapshot_every = static_cast<int>(to_long(val, lineno, full));
        } else if (full == "run.seed") {
            cfg.seed = static_cast<std::uint64_t>(to_long(val, lineno, full));
        } else if (full == "run.initial") {
            if (val != "flat" && val != "random" && val != "instanton" && val != "file")
                bad_value(lineno, full);
            cfg.initial = val;
        } else if (full == "run.initial_file") {
            cfg.initial_file = val;
        } else if (full == "run.noise") {
            cfg.noise = to_double(val, lineno, full);
        } else if (full == "run.rho") {
            cfg.rho = to_double(val, lineno, full);
        } else if (full == "run.instanton_sign") {
            long s = to_long(val, lineno, full);
            if (s != 1 && s != -1) bad_value(lineno, full);
            cfg.instanton_sign = static_cast<int>(s);
        } else {
            bad_key(lineno, full);
        }
    }
    return cfg;
}

RunConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file: " + path);
    return parse_config(in);
}

std::string serialize_config(const RunConfig& cfg) {
    std::ostringstream os;
    os << "[lattice]\n";
    const char* bnd = cfg.low == BoundaryMode::Frozen
                          ? (cfg.high == BoundaryMode::Frozen ? "frozen" : "frozen-free")
                          : (cfg.high == BoundaryMode::Frozen ? "free-frozen" : "free");
    os << "boundary = " << bnd << "\n";
    os << "dims = " << cfg.dims[0] << " x " << cfg.dims[1] << " x " << cfg.dims[2] << " x "
       << cfg.dims[3] << "\n";
    os << "frozen_depth = " << cfg.frozen_depth << "\n";
    os << "twist = " << cfg.twist[0] << cfg.twist[1] << cfg.twist[2] << "\n";
    os << "[perturbation]\n";
    os << "beta = " << fmt(cfg.beta) << "\n";
    os << "w0 = " << fmt(cfg.w0) << "\n";
    os << "[flow]\n";
    os << "adaptive = " << (cfg.schedule.adaptive ? "true" : "false") << "\n";
    os << "dtau = " << fmt(cfg.schedule.dtau) << "\n";
    os << "integrator = " << (cfg.schedule.integrator == Integrator::RK3 ? "rk3" : "euler")
       << "\n";
    os << "sample_every = " << cfg.schedule.sample_every << "\n";
    os << "snapshot_every = " << cfg.schedule.snapshot_every << "\n";
    os << "tau_max = " << fmt(cfg.schedule.tau_max) << "\n";
    os << "[run]\n";
    os << "initial = " << cfg.initial << "\n";
    if (!cfg.initial_file.empty()) os << "initial_file = " << cfg.initial_file << "\n";
    os << "instanton_sign = " << cfg.instanton_sign << "\n";
    os << "noise = " << fmt(cfg.noise) << "\n";
    os << "rho = " << fmt(cfg.rho) << "\n";
    os << "seed = " << cfg.seed << "\n";
    return os.str();
}

void write_snapshot(std::ostream& out, const LinkField& field) {
    const LatticeGeometry& geo = *field.geo;
    out.write("YMFL", 4);
    put_le<std::uint32_t>(out, 1);  // version
    for (int d = 0; d < 4; ++d) put_le<std::uint32_t>(out, static_cast<std::uint32_t>(geo.dims()[d]));
    for (int i = 0; i < 3; ++i) put_le<std::uint8_t>(out, static_cast<std::uint8_t>(geo.twist()[i]));
    put_le<std::uint8_t>(out, geo.low_mode() == BoundaryMode::Frozen ? 1 : 0);
    put_le<std::uint8_t>(out, geo.high_mode() == BoundaryMode::Frozen ? 1 : 0);
    put_le<std::uint32_t>(out, static_cast<std::uint32_t>(geo.frozen_depth()));
    for (const Quat& u : field.u) {
        put_le<double>(out, u.w);
        put_le<double>(out, u.x);
        put_le<double>(out, u.y);
        put_le<double>(out, u.z);
    }
    if (!out) throw std::runtime_error("snapshot write failed");
}

void write_snapshot_file(const std::string& path, const LinkField& field) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open snapshot file for writing: " + path);
    write_snapshot(out, field);
}

LinkField read_snapshot(std::istream& in, const LatticeGeometry*& geo_out) {
    char magic[4];
    in.read(magic, 4);
    if (!in || std::memcmp(magic, "YMFL", 4) != 0)
        throw std::runtime_error("bad snapshot magic");
    std::uint32_t version = get_le<std::uint32_t>(in);
    if (version != 1) throw std::runtime_error("unsupported snapshot version");
    std::array<int, 4> dims{};
    for (int d = 0; d < 4; ++d) dims[d] = static_cast<int>(get_le<std::uint32_t>(in));
    std::array<int, 3> twist{};
    for (int i = 0; i < 3; ++i) twist[i] = get_le<std::uint8_t>(in);
    std::uint8_t lo = get_le<std::uint8_t>(in);
    std::uint8_t hi = get_le<std::uint8_t>(in);
    int frozen_depth = static_cast<int>(get_le<std::uint32_t>(in));
    geo_out = pooled_geometry(dims, lo ? BoundaryMode::Frozen : BoundaryMode::Free,
                              hi ? BoundaryMode::Frozen : BoundaryMode::Free,
                              frozen_depth, twist);
    LinkField field(*geo_out);
    for (Quat& u : field.u) {
        u.w = get_le<double>(in);
        u.x = get_le<double>(in);
        u.y = get_le<double>(in);
        u.z = get_le<double>(in);
    }
    return field;
}

LinkField read_snapshot_file(const std::string& path, const LatticeGeometry*& geo_out) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open snapshot file: " + path);
    return read_snapshot(in, geo_out);
}

void write_flow_csv(std::ostream& out, const std::vector<FlowSample>& samples) {
    out << "tau,action,ym_k,fplus_sq,cs_estimate,grad_norm_sq,Q,dtau\n";
    for (const auto& s : samples) {
        out << fmt(s.tau) << ',' << fmt(s.action) << ',' << fmt(s.ym_k) << ','
            << fmt(s.fplus_sq) << ',' << fmt(s.cs_estimate) << ',' << fmt(s.grad_norm_sq) << ','
            << fmt(s.q_charge) << ',' << fmt(s.dtau) << '\n';
    }
}

void write_flow_csv_file(const std::string& path, const std::vector<FlowSample>& samples) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open csv file for writing: " + path);
    write_flow_csv(out, samples);
}

std::string summary_json(const RunConfig& cfg, const FlowTrace& trace) {
    nlohmann::json j;
    j["schema"] = 1;
    j["lattice"] = {{"dims", cfg.dims},
                    {"boundary_low", cfg.low == BoundaryMode::Frozen ? "frozen" : "free"},
                    {"boundary_high", cfg.high == BoundaryMode::Frozen ? "frozen" : "free"},
                    {"frozen_depth", cfg.frozen_depth},
                    {"twist", cfg.twist}};
    j["perturbation"] = {{"beta", cfg.beta}, {"w0", cfg.w0}};
    j["flow"] = {{"steps_accepted", trace.steps_accepted},
                 {"steps_rejected", trace.steps_rejected},
                 {"final_tau", trace.final_tau}};
    if (!trace.samples.empty()) {
        const FlowSample& first = trace.samples.front();
        const FlowSample& last = trace.samples.back();
        j["initial"] = {{"action", first.action},
                        {"ym_k", first.ym_k},
                        {"fplus_sq", first.fplus_sq},
                        {"cs_estimate", first.cs_estimate},
                        {"Q", first.q_charge}};
        j["final"] = {{"tau", last.tau},
                      {"action", last.action},
                      {"ym_k", last.ym_k},
                      {"fplus_sq", last.fplus_sq},
                      {"cs_estimate", last.cs_estimate},
                      {"Q", last.q_charge},
                      {"kappa", 2.0 * last.q_charge}};
    }
    return j.dump(2);
}

} // namespace ymflow
