#include "fluxforge/io.hpp"

#include <cstring>
#include <fstream>

namespace fluxforge {

namespace {

void put_u16(std::string& buf, std::uint16_t v) {
    buf.push_back(static_cast<char>(v & 0xff));
    buf.push_back(static_cast<char>((v >> 8) & 0xff));
}

void put_u32(std::string& buf, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) buf.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

void put_f64(std::string& buf, double v) {
    std::uint64_t bits;
    std::memcpy(&bits, &v, 8);
    for (int i = 0; i < 8; ++i) buf.push_back(static_cast<char>((bits >> (8 * i)) & 0xff));
}

struct Reader {
    std::string data;
    std::size_t pos = 0;

    void need(std::size_t count, const char* what) const {
        if (pos + count > data.size()) throw FormatError(std::string("truncated ") + what, pos);
    }
    std::uint16_t u16(const char* what) {
        need(2, what);
        std::uint16_t v = static_cast<std::uint8_t>(data[pos]) |
                          (static_cast<std::uint16_t>(static_cast<std::uint8_t>(data[pos + 1])) << 8);
        pos += 2;
        return v;
    }
    std::uint32_t u32(const char* what) {
        need(4, what);
        std::uint32_t v = 0;
        for (int i = 0; i < 4; ++i)
            v |= static_cast<std::uint32_t>(static_cast<std::uint8_t>(data[pos + i])) << (8 * i);
        pos += 4;
        return v;
    }
    double f64(const char* what) {
        need(8, what);
        std::uint64_t bits = 0;
        for (int i = 0; i < 8; ++i)
            bits |= static_cast<std::uint64_t>(static_cast<std::uint8_t>(data[pos + i])) << (8 * i);
        pos += 8;
        double v;
        std::memcpy(&v, &bits, 8);
        return v;
    }
};

}  // namespace

void write_ffld(const std::string& path, const VectorField& V, double q) {
    std::string buf;
    buf.reserve(16 + V.values().size() * 8);
    buf += "FFLD";
    put_u16(buf, 1);
    put_u16(buf, static_cast<std::uint16_t>(V.dim()));
    put_u32(buf, static_cast<std::uint32_t>(V.grid().cells));
    put_f64(buf, q);
    for (double v : V.values()) put_f64(buf, v);

    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
    if (!out) throw std::runtime_error("write failed: " + path);
}

std::pair<VectorField, double> read_ffld(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open: " + path);
    Reader r;
    r.data.assign(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());

    r.need(4, "magic");
    if (r.data.compare(0, 4, "FFLD") != 0) throw FormatError("bad magic", 0);
    r.pos = 4;
    std::uint16_t version = r.u16("version");
    if (version != 1) throw FormatError("unsupported version", 4);
    std::uint16_t dim = r.u16("dim");
    if (dim < 1 || dim > kMaxDim) throw FormatError("dimension out of range", 6);
    std::uint32_t cells = r.u32("cells_per_axis");
    if (cells < 1 || cells > 1u << 20) throw FormatError("cells_per_axis out of range", 8);
    double q = r.f64("q");

    GridSpec grid;
    try {
        grid = GridSpec(dim, static_cast<int>(cells));
    } catch (const std::invalid_argument&) {
        throw FormatError("grid dimensions out of range", 6);
    }
    const long total = grid.cell_count() * dim;
    std::vector<double> values(total);
    for (long i = 0; i < total; ++i) values[i] = r.f64("values");
    if (r.pos != r.data.size()) throw FormatError("trailing bytes", r.pos);
    return {VectorField(grid, std::move(values)), q};
}

ChargeSet charges_from_json(const nlohmann::json& j, int expected_dim) {
    if (!j.is_array()) throw std::runtime_error("charge file must be a JSON array");
    ChargeSet cs;
    for (const auto& e : j) {
        Charge c;
        const auto& pos = e.at("pos");
        if (!pos.is_array() || pos.size() < 1 || pos.size() > kMaxDim)
            throw std::runtime_error("charge pos must be an array of 1..4 reals");
        if (expected_dim && static_cast<int>(pos.size()) != expected_dim)
            throw std::runtime_error("charge dimension mismatch");
        for (std::size_t a = 0; a < pos.size(); ++a) c.pos[a] = pos[a].get<double>();
        c.deg = e.at("deg").get<long>();
        cs.items.push_back(c);
    }
    return cs;
}

nlohmann::json charges_to_json(const ChargeSet& cs, int dim) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& c : cs.items) {
        nlohmann::json pos = nlohmann::json::array();
        for (int a = 0; a < dim; ++a) pos.push_back(c.pos[a]);
        arr.push_back({{"pos", pos}, {"deg", c.deg}});
    }
    return arr;
}

ChargeSet read_charges(const std::string& path, int expected_dim) {
    return charges_from_json(load_json(path), expected_dim);
}

nlohmann::json current_to_json(const OneCurrent& c) {
    nlohmann::json segs = nlohmann::json::array();
    for (const auto& s : c.segments) {
        nlohmann::json a = nlohmann::json::array(), b = nlohmann::json::array();
        for (int d = 0; d < c.dim; ++d) {
            a.push_back(s.a[d]);
            b.push_back(s.b[d]);
        }
        segs.push_back({{"a", a}, {"b", b}, {"mult", s.mult}});
    }
    return {{"dim", c.dim}, {"segments", segs}, {"mass", c.mass()}};
}

OneCurrent current_from_json(const nlohmann::json& j) {
    OneCurrent c;
    c.dim = j.at("dim").get<int>();
    for (const auto& e : j.at("segments")) {
        Segment s;
        for (std::size_t d = 0; d < e.at("a").size(); ++d) s.a[d] = e.at("a")[d].get<double>();
        for (std::size_t d = 0; d < e.at("b").size(); ++d) s.b[d] = e.at("b")[d].get<double>();
        s.mult = e.at("mult").get<long>();
        c.segments.push_back(s);
    }
    return c;
}

nlohmann::json report_to_json(const FluxAuditReport& rep) {
    nlohmann::json samples = nlohmann::json::array();
    for (const auto& s : rep.samples) {
        nlohmann::json center = nlohmann::json::array();
        for (int a = 0; a < kMaxDim; ++a) center.push_back(s.center[a]);
        samples.push_back({{"center", center},
                           {"rho", s.rho},
                           {"flux", s.flux},
                           {"nearest", s.nearest},
                           {"deviation", s.deviation},
                           {"skipped", s.skipped}});
    }
    return {{"samples", samples},
            {"pass_fraction", rep.pass_fraction},
            {"max_deviation", rep.max_deviation},
            {"n_skipped", rep.n_skipped},
            {"tolerance", rep.tolerance},
            {"verdict", to_string(rep.verdict)}};
}

nlohmann::json records_to_json(const CubicMesh& mesh, const std::vector<CubeRecord>& recs) {
    nlohmann::json shift = nlohmann::json::array();
    for (int a = 0; a < mesh.dim; ++a) shift.push_back(mesh.shift[a]);
    nlohmann::json cubes = nlohmann::json::array();
    for (const auto& r : recs) {
        nlohmann::json center = nlohmann::json::array(), mean = nlohmann::json::array();
        for (int a = 0; a < mesh.dim; ++a) {
            center.push_back(r.center[a]);
            mean.push_back(r.mean[a]);
        }
        const char* cls = r.cls == CubeClass::good
                              ? "good"
                              : (r.cls == CubeClass::bad ? "bad" : "non-integral");
        cubes.push_back({{"index", r.index},
                         {"center", center},
                         {"mean", mean},
                         {"flux", r.flux},
                         {"degree", r.degree},
                         {"class", cls}});
    }
    return {{"dim", mesh.dim},
            {"epsilon", mesh.epsilon},
            {"shift", shift},
            {"q_eps", mesh.q_eps},
            {"cubes", cubes}};
}

nlohmann::json step_to_json(const StepFunction& s) {
    return {{"breakpoints", s.breakpoints}, {"values", s.values}, {"offset", s.offset}};
}

nlohmann::json sweep_to_json(const std::vector<SweepRow>& rows) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& r : rows)
        arr.push_back({{"epsilon", r.epsilon},
                       {"lp_error", r.lp_error},
                       {"bad_count", r.bad_count},
                       {"alpha", r.alpha},
                       {"wallclock_ms", r.wallclock_ms},
                       {"error", r.error}});
    return arr;
}

nlohmann::json load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open: " + path);
    try {
        return nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw FormatError(std::string("JSON parse error: ") + e.what(), e.byte);
    }
}

void save_json(const std::string& path, const nlohmann::json& j) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << j.dump(2) << "\n";
}

}  // namespace fluxforge
