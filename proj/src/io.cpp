#include "hexcap/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace hexcap {

namespace {

constexpr int kVersion = 1;

json hexnum(double x) { return to_hex(x); }

double num(const json& j, const char* key)
{
    if (!j.contains(key)) throw IoError(std::string("missing field: ") + key);
    const json& v = j.at(key);
    if (v.is_string()) return from_hex(v.get<std::string>());
    if (v.is_number()) return v.get<double>();
    throw IoError(std::string("field is not a number: ") + key);
}

json interval(const Interval& x) { return json::array({to_hex(x.lo), to_hex(x.hi)}); }

Interval interval_at(const json& j, const char* key)
{
    if (!j.contains(key) || !j.at(key).is_array() || j.at(key).size() != 2)
        throw IoError(std::string("missing interval: ") + key);
    const json& a = j.at(key);
    return Interval(from_hex(a[0].get<std::string>()), from_hex(a[1].get<std::string>()));
}

void check_format(const json& j, const char* format)
{
    if (!j.is_object() || j.value("format", "") != format) throw IoError(std::string("not a ") + format + " file");
    if (j.value("version", 0) != kVersion) throw IoError("unsupported format version");
}

json reps(const OrbitTable& t)
{
    json r = json::array();
    for (const auto& n : t.reps()) r.push_back({n[0], n[1]});
    return r;
}

void check_reps(const json& j, const OrbitTable& t)
{
    if (!j.contains("reps")) throw IoError("missing rep list");
    const json& r = j.at("reps");
    if (!r.is_array() || static_cast<Eigen::Index>(r.size()) != t.size())
        throw IoError("rep list does not match the orbit table");
    for (Eigen::Index i = 0; i < t.size(); ++i)
        if (r[i][0].get<int>() != t.rep(i)[0] || r[i][1].get<int>() != t.rep(i)[1])
            throw IoError("rep list does not match the orbit table");
}

json coeffs(const Sequence& u)
{
    json c = json::array();
    for (Eigen::Index i = 0; i < u.size(); ++i) c.push_back({to_hex(u[i].real()), to_hex(u[i].imag())});
    return c;
}

Sequence sequence_from(const json& c, TablePtr t, double d)
{
    if (!c.is_array() || static_cast<Eigen::Index>(c.size()) != t->size())
        throw IoError("coefficient count does not match the orbit table");
    Sequence u(t, d);
    for (Eigen::Index i = 0; i < t->size(); ++i)
        u[i] = Complex(from_hex(c[i][0].get<std::string>()), from_hex(c[i][1].get<std::string>()));
    return u;
}

template <class F>
auto guarded(F f)
{
    try {
        return f();
    } catch (const IoError&) {
        throw;
    } catch (const std::exception& e) {
        throw IoError(e.what());
    }
}

json hexes(const std::vector<double>& v)
{
    json a = json::array();
    for (double x : v) a.push_back(to_hex(x));
    return a;
}

std::vector<double> doubles(const json& a)
{
    std::vector<double> v;
    for (const auto& x : a) v.push_back(from_hex(x.get<std::string>()));
    return v;
}

} // namespace

std::string read_text(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text(const std::string& path, const std::string& text)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + path);
    out << text;
    if (!out) throw IoError("write failed: " + path);
}

std::string digest(const std::string& bytes)
{
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

json parse_json(const std::string& text, const std::string& what)
{
    try {
        return json::parse(text);
    } catch (const std::exception& e) {
        throw IoError("malformed " + what + ": " + e.what());
    }
}

json to_json(const ModelParams& p)
{
    return {{"group", p.j}, {"N", p.N}, {"d", hexnum(p.d)}, {"nu", hexnum(p.nu)}, {"mu", hexnum(p.mu)},
            {"gamma", hexnum(p.gamma)}};
}

ModelParams params_from_json(const json& j)
{
    return guarded([&] {
        ModelParams p;
        p.j = j.at("group").get<int>();
        p.N = j.at("N").get<int>();
        p.d = num(j, "d");
        p.nu = num(j, "nu");
        p.mu = num(j, "mu");
        p.gamma = num(j, "gamma");
        p.validate();
        return p;
    });
}

json to_json(const SolutionFile& s)
{
    json j = {{"format", "hexcap-solution"}, {"version", kVersion}, {"params", to_json(s.params)},
              {"reps", reps(*s.u.table)}, {"coefficients", coeffs(s.u)}};
    if (s.residual) j["residual"] = to_hex(*s.residual);
    if (s.seed) j["seed"] = *s.seed;
    return j;
}

SolutionFile solution_from_json(const json& j)
{
    check_format(j, "hexcap-solution");
    return guarded([&] {
        SolutionFile s;
        s.params = params_from_json(j.at("params"));
        TablePtr t = table_for(s.params.j, s.params.N);
        check_reps(j, *t);
        s.u = sequence_from(j.at("coefficients"), t, s.params.d);
        if (j.contains("residual")) s.residual = num(j, "residual");
        if (j.contains("seed")) s.seed = j.at("seed").get<std::uint64_t>();
        return s;
    });
}

json to_json(const Certificate& c)
{
    return {{"format", "hexcap-certificate"},
            {"version", kVersion},
            {"params", to_json(c.params)},
            {"Y0", interval(c.Y0)},
            {"Z0", interval(c.Z0)},
            {"Z1", interval(c.Z1)},
            {"Z2_base", interval(c.Z2_base)},
            {"Z2_slope", interval(c.Z2_slope)},
            {"Y0_tail", interval(c.Y0_tail)},
            {"Z1_tail", interval(c.Z1_tail)},
            {"L_N", interval(c.LN)},
            {"opnorm_A", interval(c.opnorm_A)},
            {"phi_mode", to_string(c.phi_mode)},
            {"r0", to_hex(c.r0)},
            {"margin1", interval(c.margin1)},
            {"margin2", interval(c.margin2)},
            {"success", c.success},
            {"violated", c.violated},
            {"digest", c.digest}};
}

Certificate certificate_from_json(const json& j)
{
    check_format(j, "hexcap-certificate");
    return guarded([&] {
        Certificate c;
        c.params = params_from_json(j.at("params"));
        c.Y0 = interval_at(j, "Y0");
        c.Z0 = interval_at(j, "Z0");
        c.Z1 = interval_at(j, "Z1");
        c.Z2_base = interval_at(j, "Z2_base");
        c.Z2_slope = interval_at(j, "Z2_slope");
        c.Y0_tail = interval_at(j, "Y0_tail");
        c.Z1_tail = interval_at(j, "Z1_tail");
        c.LN = interval_at(j, "L_N");
        c.opnorm_A = interval_at(j, "opnorm_A");
        c.phi_mode = phi_mode_from_string(j.at("phi_mode").get<std::string>());
        c.r0 = num(j, "r0");
        c.margin1 = interval_at(j, "margin1");
        c.margin2 = interval_at(j, "margin2");
        c.success = j.at("success").get<bool>();
        c.violated = j.value("violated", "");
        c.digest = j.value("digest", "");
        return c;
    });
}

json to_json(const ChebBranch& b)
{
    json u = json::array(), ud = json::array();
    for (const auto& c : b.u) u.push_back(coeffs(c));
    for (const auto& c : b.u_dot) ud.push_back(coeffs(c));
    return {{"format", "hexcap-branch"},
            {"version", kVersion},
            {"params", to_json(b.params)},
            {"Nc", b.Nc},
            {"s_fix", to_hex(b.s_fix)},
            {"n_fft", b.n_fft},
            {"pairing", "real-euclidean"},
            {"reps", reps(*b.u.front().table)},
            {"mu", hexes(b.mu)},
            {"u", u},
            {"mu_dot", hexes(b.mu_dot)},
            {"u_dot", ud}};
}

ChebBranch branch_from_json(const json& j)
{
    check_format(j, "hexcap-branch");
    return guarded([&] {
        ChebBranch b;
        b.params = params_from_json(j.at("params"));
        b.Nc = j.at("Nc").get<int>();
        b.s_fix = num(j, "s_fix");
        b.n_fft = j.at("n_fft").get<int>();
        if (b.Nc < 0 || !(b.s_fix > 0)) throw IoError("invalid branch header");
        TablePtr t = table_for(b.params.j, b.params.N);
        check_reps(j, *t);
        b.mu = doubles(j.at("mu"));
        b.mu_dot = doubles(j.at("mu_dot"));
        for (const auto& c : j.at("u")) b.u.push_back(sequence_from(c, t, b.params.d));
        for (const auto& c : j.at("u_dot")) b.u_dot.push_back(sequence_from(c, t, b.params.d));
        const size_t n = static_cast<size_t>(b.Nc) + 1;
        if (b.mu.size() != n || b.mu_dot.size() != n || b.u.size() != n || b.u_dot.size() != n)
            throw IoError("branch series length does not match Nc");
        return b;
    });
}

json to_json(const BranchCertificate& c)
{
    return {{"format", "hexcap-branch-certificate"},
            {"version", kVersion},
            {"params", to_json(c.params)},
            {"Nc", c.Nc},
            {"s_fix", to_hex(c.s_fix)},
            {"Y0", interval(c.Y0s)},
            {"Z0", interval(c.Z0s)},
            {"Z1", interval(c.Z1s)},
            {"Z2_base", interval(c.Z2s_base)},
            {"Z2_slope", interval(c.Z2s_slope)},
            {"L_NK", interval(c.LNK)},
            {"tail_norm", interval(c.tail_norm)},
            {"lnk_mode", to_string(c.lnk_mode)},
            {"phi_mode", to_string(c.phi_mode)},
            {"pairing", "real-euclidean"},
            {"r0", to_hex(c.r0)},
            {"margin1", interval(c.margin1)},
            {"margin2", interval(c.margin2)},
            {"success", c.success},
            {"violated", c.violated},
            {"digest", c.digest}};
}

BranchCertificate branch_certificate_from_json(const json& j)
{
    check_format(j, "hexcap-branch-certificate");
    return guarded([&] {
        BranchCertificate c;
        c.params = params_from_json(j.at("params"));
        c.Nc = j.at("Nc").get<int>();
        c.s_fix = num(j, "s_fix");
        c.Y0s = interval_at(j, "Y0");
        c.Z0s = interval_at(j, "Z0");
        c.Z1s = interval_at(j, "Z1");
        c.Z2s_base = interval_at(j, "Z2_base");
        c.Z2s_slope = interval_at(j, "Z2_slope");
        c.LNK = interval_at(j, "L_NK");
        c.tail_norm = interval_at(j, "tail_norm");
        c.lnk_mode = lnk_mode_from_string(j.at("lnk_mode").get<std::string>());
        c.phi_mode = phi_mode_from_string(j.at("phi_mode").get<std::string>());
        c.r0 = num(j, "r0");
        c.margin1 = interval_at(j, "margin1");
        c.margin2 = interval_at(j, "margin2");
        c.success = j.at("success").get<bool>();
        c.violated = j.value("violated", "");
        c.digest = j.value("digest", "");
        return c;
    });
}

std::string to_csv(const std::vector<GridRow>& rows)
{
    std::string out = "x1,x2,u\n";
    char buf[96];
    for (const auto& r : rows) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", r.x1, r.x2, r.value);
        out += buf;
    }
    return out;
}

} // namespace hexcap
