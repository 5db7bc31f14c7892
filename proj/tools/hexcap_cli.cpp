#include <cstdio>
#include <iostream>
#include <map>
#include <sstream>

#include <CLI11.hpp>

#include "hexcap/io.hpp"

using namespace hexcap;

namespace {

enum Exit { kOk = 0, kProofFailed = 2, kDiverged = 3, kInvalid = 4 };

struct ProofFailed : std::runtime_error {
    using std::runtime_error::runtime_error;
};

int parse_group(const std::string& g)
{
    if (g == "d3" || g == "D3" || g == "3") return 3;
    if (g == "d6" || g == "D6" || g == "6") return 6;
    throw std::invalid_argument("group must be d3 or d6");
}

struct ParamFlags {
    std::string group = "d6";
    ModelParams p{6, 8, 5.0, 0.3, 2.1, 1.2};

    void add(CLI::App* app)
    {
        app->add_option("--group", group, "d3 or d6")->capture_default_str();
        app->add_option("--N", p.N, "truncation")->capture_default_str();
        app->add_option("--d", p.d, "half-period")->capture_default_str();
        app->add_option("--mu", p.mu)->capture_default_str();
        app->add_option("--gamma", p.gamma)->capture_default_str();
        app->add_option("--nu", p.nu, "weight of the l1 norm")->capture_default_str();
    }
    ModelParams get() const
    {
        ModelParams q = p;
        q.j = parse_group(group);
        q.validate();
        return q;
    }
};

struct FindFlags {
    std::uint64_t seed = 0;
    int retries = 50;
    FindOptions opt;

    void add(CLI::App* app)
    {
        app->add_option("--seed", seed, "first seed")->capture_default_str();
        app->add_option("--retries", retries, "further seeds tried after the first")->capture_default_str();
        app->add_option("--tol", opt.tol, "Newton residual tolerance")->capture_default_str();
        app->add_option("--maxit", opt.maxit)->capture_default_str();
        app->add_option("--amplitude", opt.amplitude, "scale of the random initial grid")->capture_default_str();
        app->add_option("--min-norm", opt.min_norm, "reject solutions with smaller |u|_1")->capture_default_str();
    }
};

SolutionFile run_find(const ModelParams& p, const FindFlags& f)
{
    if (f.retries < 0) throw std::invalid_argument("retries must be non-negative");
    auto r = find_solution(p, f.seed, f.retries + 1, f.opt);
    if (!r) throw NumericsError("no seed converged to a nontrivial solution");
    std::fprintf(stderr, "seed %llu converged: residual %.3e after %d iterations\n",
                 static_cast<unsigned long long>(r->seed), r->newton.residual, r->newton.iterations);
    return {p, r->newton.u, r->newton.residual, r->seed};
}

void print_bound(const char* name, const Interval& x) { std::printf("%-9s %.6e  [%a, %a]\n", name, x.hi, x.lo, x.hi); }

void print_check(const RadiiCheck& c, double r0)
{
    std::printf("r0        %.6e\n", r0);
    std::printf("margin1   %.6e (must be < 0)\n", c.margin1.hi);
    std::printf("margin2   %.6e (must be < 1)\n", c.margin2.hi);
    std::printf("%s%s\n", c.success ? "PROVEN" : "NOT PROVEN", c.success ? "" : (": " + c.violated).c_str());
}

void print_certificate(const Certificate& c)
{
    print_bound("Y0", c.Y0);
    print_bound("Z0", c.Z0);
    print_bound("Z1", c.Z1);
    print_bound("Z2_base", c.Z2_base);
    print_bound("Z2_slope", c.Z2_slope);
    print_check(c.recheck(), c.r0);
}

void print_certificate(const BranchCertificate& c)
{
    print_bound("Y0[s]", c.Y0s);
    print_bound("Z0[s]", c.Z0s);
    print_bound("Z1[s]", c.Z1s);
    print_bound("Z2_base", c.Z2s_base);
    print_bound("Z2_slope", c.Z2s_slope);
    print_bound("L_NK", c.LNK);
    std::printf("L_NK mode %s\n", to_string(c.lnk_mode));
    print_check(c.recheck(), c.r0);
}

// "Y0=9.64e-6,Z0=...,Z1=...,Z2=...,r0=..."
std::map<std::string, double> parse_constants(const std::string& s)
{
    std::map<std::string, double> m;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        auto eq = item.find('=');
        if (eq == std::string::npos) throw std::invalid_argument("expected key=value in " + item);
        std::string key = item.substr(0, eq), val = item.substr(eq + 1);
        char* end = nullptr;
        double x = std::strtod(val.c_str(), &end);
        if (end == val.c_str() || *end != '\0') throw std::invalid_argument("bad number: " + val);
        m[key] = x;
    }
    for (const char* k : {"Y0", "Z0", "Z1", "Z2", "r0"})
        if (!m.count(k)) throw std::invalid_argument(std::string("missing constant ") + k);
    return m;
}

// Z2 is taken as the value Z2(r0); the slope is zero.
int replay(const std::string& constants)
{
    auto m = parse_constants(constants);
    RadiiCheck c = check_radii(Interval(m["Y0"]), Interval(m["Z0"]), Interval(m["Z1"]), Interval(m["Z2"]),
                               Interval(0.0), m["r0"]);
    print_check(c, m["r0"]);
    return c.success ? kOk : kProofFailed;
}

void write_json(const std::string& path, const json& j) { write_text(path, j.dump(2) + "\n"); }

void write_or_print(const std::string& path, const std::string& text)
{
    if (path.empty() || path == "-")
        std::fwrite(text.data(), 1, text.size(), stdout);
    else
        write_text(path, text);
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Symmetric periodic Swift-Hohenberg patterns on the hexagonal lattice with interval proofs"};
    app.require_subcommand(1);

    // find
    auto* find = app.add_subcommand("find", "Newton from random initial guesses");
    ParamFlags find_p;
    FindFlags find_f;
    std::string find_out;
    find_p.add(find);
    find_f.add(find);
    find->add_option("-o,--output", find_out, "solution file")->required();

    // prove
    auto* prove = app.add_subcommand("prove", "Interval proof of a solution");
    std::string prove_in, prove_out, replay_constants, recheck_path, prove_phi = "per_index";
    ProofOptions popt;
    double prove_r0 = 0;
    prove->add_option("input", prove_in, "solution file");
    prove->add_option("-o,--output", prove_out, "certificate file");
    prove->add_option("--r0", prove_r0, "fixed radius instead of the scan");
    prove->add_option("--r-min", popt.r_min)->capture_default_str();
    prove->add_option("--r-max", popt.r_max)->capture_default_str();
    prove->add_option("--phi-mode", prove_phi, "per_index or uniform")->capture_default_str();
    prove->add_option("--replay-constants", replay_constants, "Y0=..,Z0=..,Z1=..,Z2=..,r0=..");
    prove->add_option("--recheck", recheck_path, "re-verify a stored certificate");

    // continue
    auto* cont = app.add_subcommand("continue", "Pseudo-arclength continuation and branch proof");
    ParamFlags cont_p;
    FindFlags cont_f;
    std::string cont_in, cont_out, cont_cert, cont_lnk = "conservative", cont_phi = "per_index", cont_replay;
    int ncheb = 3, direction = 1;
    double sfix = 0.02, cont_r0 = 0;
    ContinuationOptions copt;
    BranchProofOptions bopt;
    cont_p.add(cont);
    cont_f.add(cont);
    cont->add_option("--input", cont_in, "starting solution (else found from the parameter flags)");
    cont->add_option("--ncheb", ncheb, "Chebyshev order")->capture_default_str();
    cont->add_option("--sfix", sfix, "arclength span")->capture_default_str();
    cont->add_option("--direction", direction, "+1 or -1, sign of the initial mu velocity")->capture_default_str();
    cont->add_option("--nfft", copt.n_fft, "grid size (power of two, default >= 2 ncheb)");
    cont->add_option("--lnk-mode", cont_lnk, "conservative or literal")->capture_default_str();
    cont->add_option("--phi-mode", cont_phi)->capture_default_str();
    cont->add_option("--r0", cont_r0, "fixed radius instead of the scan");
    cont->add_option("--r-max", bopt.r_max)->capture_default_str();
    cont->add_option("-o,--output", cont_out, "branch file");
    cont->add_option("--cert", cont_cert, "branch certificate file");
    cont->add_option("--replay-constants", cont_replay, "Y0=..,Z0=..,Z1=..,Z2=..,r0=..");

    // render
    auto* render = app.add_subcommand("render", "Sample a solution or branch on a domain as CSV");
    std::string render_in, render_out, domain = "parallelogram0";
    int resolution = 128;
    double render_s = 0;
    bool force = false;
    render->add_option("input", render_in, "solution or branch file")->required();
    render->add_option("--domain", domain, "parallelogram0, parallelogram2d, delta1, delta2, hexagon0")
        ->capture_default_str();
    render->add_option("--resolution", resolution)->capture_default_str();
    render->add_option("--s", render_s, "branch parameter in [-1, 1]")->capture_default_str();
    render->add_flag("--force", force, "allow hexagon0 for a D3 solution");
    render->add_option("-o,--output", render_out, "CSV file (stdout if absent)");

    // verify
    auto* verify = app.add_subcommand("verify", "Check the symmetry and tiling claims numerically");
    std::string verify_in;
    int samples = 1000;
    double vtol = 1e-9;
    unsigned long vseed = 1;
    verify->add_option("input", verify_in, "solution file")->required();
    verify->add_option("--samples", samples)->capture_default_str();
    verify->add_option("--tol", vtol, "relative to |u|_1")->capture_default_str();
    verify->add_option("--seed", vseed)->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kOk : kInvalid;
    }

    try {
        if (*find) {
            SolutionFile s = run_find(find_p.get(), find_f);
            write_json(find_out, to_json(s));
            return kOk;
        }

        if (*prove) {
            if (!replay_constants.empty()) return replay(replay_constants);
            if (!recheck_path.empty()) {
                Certificate c = certificate_from_json(parse_json(read_text(recheck_path), "certificate"));
                RadiiCheck rc = c.recheck();
                print_certificate(c);
                if (rc.success != c.success) {
                    std::fprintf(stderr, "stored verdict disagrees with the recomputed one\n");
                    return kProofFailed;
                }
                return rc.success ? kOk : kProofFailed;
            }
            if (prove_in.empty()) throw std::invalid_argument("prove needs an input solution file");
            std::string text = read_text(prove_in);
            SolutionFile s = solution_from_json(parse_json(text, "solution"));
            popt.phi_mode = phi_mode_from_string(prove_phi);
            if (prove->count("--r0")) popt.r0 = prove_r0;
            Certificate c = prove_solution(s.u, s.params, popt);
            c.digest = digest(text);
            print_certificate(c);
            if (!prove_out.empty()) write_json(prove_out, to_json(c));
            return c.success ? kOk : kProofFailed;
        }

        if (*cont) {
            if (!cont_replay.empty()) return replay(cont_replay);
            if (!(sfix > 0)) throw std::invalid_argument("--sfix must be positive");
            if (ncheb < 0) throw std::invalid_argument("--ncheb must be non-negative");
            if (direction != 1 && direction != -1) throw std::invalid_argument("--direction must be +1 or -1");
            SolutionFile s;
            std::string source;
            if (!cont_in.empty()) {
                source = read_text(cont_in);
                s = solution_from_json(parse_json(source, "solution"));
            } else {
                s = run_find(cont_p.get(), cont_f);
                source = to_json(s).dump(2) + "\n";
            }
            ChebBranch b = continue_branch({s.params.mu, s.u}, s.params, sfix, ncheb, direction, copt);
            bopt.lnk_mode = lnk_mode_from_string(cont_lnk);
            bopt.phi_mode = phi_mode_from_string(cont_phi);
            if (cont->count("--r0")) bopt.r0 = cont_r0;
            json bj = to_json(b);
            std::string btext = bj.dump(2) + "\n";
            if (!cont_out.empty()) write_text(cont_out, btext);
            BranchCertificate c = prove_branch(b, bopt);
            c.digest = digest(btext);
            print_certificate(c);
            if (!cont_cert.empty()) write_json(cont_cert, to_json(c));
            return c.success ? kOk : kProofFailed;
        }

        if (*render) {
            json j = parse_json(read_text(render_in), "input");
            Domain dom{domain_kind_from_string(domain), 0};
            Sequence u;
            if (j.value("format", "") == "hexcap-branch") {
                if (!(render_s >= -1 && render_s <= 1)) throw std::invalid_argument("--s must lie in [-1, 1]");
                u = branch_from_json(j).at(render_s).u;
            } else {
                u = solution_from_json(j).u;
            }
            if (dom.kind == DomainKind::hexagon0 && u.j() == 3 && !force)
                throw std::invalid_argument("hexagon0 is not a period domain for D3; pass --force to render anyway");
            dom.d = u.d;
            write_or_print(render_out, to_csv(sample_grid(u, dom, resolution)));
            return kOk;
        }

        if (*verify) {
            SolutionFile s = solution_from_json(parse_json(read_text(verify_in), "solution"));
            TilingReport r = verify_tiling(s.u, samples, vtol, vseed);
            for (const auto& c : r.checks) std::printf("%-34s max violation %.3e\n", c.name.c_str(), c.max_violation);
            std::printf("threshold %.3e (tol %.1e x |u|_1 = %.6e)\n", r.tol, vtol, r.scale);
            std::printf("%s\n", r.ok ? "OK" : "VIOLATED");
            return r.ok ? kOk : kProofFailed;
        }
    } catch (const NumericsError& e) {
        std::fprintf(stderr, "numerics: %s\n", e.what());
        return kDiverged;
    } catch (const IntervalError& e) {
        std::fprintf(stderr, "proof failed: %s\n", e.what());
        return kProofFailed;
    } catch (const IoError& e) {
        std::fprintf(stderr, "io: %s\n", e.what());
        return kInvalid;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "invalid: %s\n", e.what());
        return kInvalid;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return kOk;
}
