#include "cli_app.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <set>
#include <sstream>
#include <variant>

#include <CLI11.hpp>
#include <json.hpp>

#include "hsres/expansion.hpp"
#include "hsres/model.hpp"
#include "hsres/oracle.hpp"
#include "hsres/semiclassical.hpp"
#include "hsres/solver.hpp"

namespace hsres::cli {

namespace {

using json = nlohmann::ordered_json;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

using Cell = std::variant<std::monostate, double, long, std::string, bool>;

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
};

std::string cell_text(const Cell& c) {
    if (std::holds_alternative<double>(c)) return format_double(std::get<double>(c));
    if (std::holds_alternative<long>(c)) return std::to_string(std::get<long>(c));
    if (std::holds_alternative<std::string>(c)) return std::get<std::string>(c);
    if (std::holds_alternative<bool>(c)) return std::get<bool>(c) ? "true" : "false";
    return "";
}

json cell_json(const Cell& c) {
    if (std::holds_alternative<double>(c)) return std::get<double>(c);
    if (std::holds_alternative<long>(c)) return std::get<long>(c);
    if (std::holds_alternative<std::string>(c)) return std::get<std::string>(c);
    if (std::holds_alternative<bool>(c)) return std::get<bool>(c);
    return nullptr;
}

// Same layout as dump(2), but floats use format_double. Non-finite values become null.
void dump_json(const json& j, std::ostream& os, int depth = 0) {
    const std::string pad(2 * (depth + 1), ' '), close(2 * depth, ' ');
    if (j.is_object()) {
        if (j.empty()) {
            os << "{}";
            return;
        }
        os << "{\n";
        bool first = true;
        for (auto it = j.begin(); it != j.end(); ++it) {
            os << (first ? "" : ",\n") << pad << json(it.key()).dump() << ": ";
            dump_json(it.value(), os, depth + 1);
            first = false;
        }
        os << "\n" << close << "}";
    } else if (j.is_array()) {
        if (j.empty()) {
            os << "[]";
            return;
        }
        os << "[\n";
        for (std::size_t i = 0; i < j.size(); ++i) {
            os << (i ? ",\n" : "") << pad;
            dump_json(j[i], os, depth + 1);
        }
        os << "\n" << close << "]";
    } else if (j.is_number_float()) {
        const double v = j.get<double>();
        if (std::isfinite(v)) {
            std::string t = format_double(v);
            // Keep floats recognizable as floats after a round trip.
            if (t.find_first_of(".eEn") == std::string::npos) t += ".0";
            os << t;
        } else {
            os << "null";
        }
    } else {
        os << j.dump();
    }
}

void write_csv(const Table& t, std::ostream& os) {
    for (std::size_t i = 0; i < t.columns.size(); ++i) os << (i ? "," : "") << t.columns[i];
    os << "\n";
    for (const auto& r : t.rows) {
        for (std::size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << cell_text(r[i]);
        os << "\n";
    }
}

json rows_json(const Table& t) {
    json a = json::array();
    for (const auto& r : t.rows) {
        json o = json::object();
        for (std::size_t i = 0; i < r.size(); ++i) o[t.columns[i]] = cell_json(r[i]);
        a.push_back(std::move(o));
    }
    return a;
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

double parse_number(const std::string& s, const std::string& what) {
    std::size_t pos = 0;
    double v = 0.0;
    try {
        v = std::stod(s, &pos);
    } catch (const std::exception&) {
        throw UsageError("cannot parse " + what + ": '" + s + "'");
    }
    if (pos != s.size() || !std::isfinite(v)) throw UsageError("cannot parse " + what + ": '" + s + "'");
    return v;
}

std::vector<double> parse_list(const std::string& s, std::size_t n, const std::string& what) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(parse_number(trim(item), what));
    if (n && out.size() != n) throw UsageError(what + " needs " + std::to_string(n) + " comma-separated values");
    return out;
}

std::string join(const std::vector<double>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + format_double(v[i]);
    return s;
}

Point to_point(const std::vector<double>& v) { return {v[0], v[1], v[2]}; }

// Options shared by every subcommand.
struct Common {
    std::string bc = "dirichlet";
    std::string alpha = "0";
    double y3 = 1.0;
    std::string format = "csv";
    std::string out;
    std::string config;

    void attach(CLI::App* app, bool with_format = true) {
        app->add_option("--bc", bc, "boundary condition")->check(CLI::IsMember({"dirichlet", "neumann"}, CLI::ignore_case));
        app->add_option("--alpha", alpha, "coupling: number, critical-, critical+, critical or lnpi2k:<k>");
        app->add_option("--y3", y3, "height of the interaction point");
        if (with_format) app->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
        app->add_option("--out", out, "output file (default stdout)");
        app->add_option("--config", config, "key=value or JSON config file; flags override");
    }
    ModelParams params() const {
        const double a = parse_alpha(alpha, bc, y3);
        return ModelParams::make(parse_boundary(bc), a, y3);
    }
    void put(json& c) const {
        c["bc"] = bc;
        c["alpha"] = alpha;
        c["y3"] = y3;
        c["format"] = format;
    }
};

struct Doc {
    std::string command;
    json config = json::object();
    Table table;
    json extra = json::object();
};

void emit(const Doc& d, const Common& c, std::ostream& out) {
    std::ofstream file;
    std::ostream* os = &out;
    if (!c.out.empty()) {
        file.open(c.out);
        if (!file) throw UsageError("cannot open output file " + c.out);
        os = &file;
    }
    if (c.format == "json") {
        json j = json::object();
        j["command"] = d.command;
        j["config"] = d.config;
        j["rows"] = rows_json(d.table);
        for (auto it = d.extra.begin(); it != d.extra.end(); ++it) j[it.key()] = it.value();
        dump_json(j, *os);
        *os << "\n";
    } else {
        write_csv(d.table, *os);
    }
}

bool is_pair_kind(ResonanceKind k) {
    return k == ResonanceKind::ComplexPair || k == ResonanceKind::LowPair || k == ResonanceKind::Exceptional;
}

// ---- find ----
struct FindOpts {
    Common c;
    double rmax = 10.0;
    bool no_check = false;
};

int cmd_find(const FindOpts& o, std::ostream& out, std::ostream& err) {
    const auto p = o.c.params();
    if (!(o.rmax > 0.0)) throw UsageError("--rmax must be positive");
    Doc d;
    d.command = "find";
    o.c.put(d.config);
    d.config["rmax"] = o.rmax;
    d.config["no-check"] = o.no_check;
    d.table.columns = {"re", "im", "kind", "branch", "multiplicity", "gamma_residual", "on_curve_error"};
    const auto roots = find_all(p, o.rmax);
    for (const auto& r : roots) {
        Cell curve;
        if (is_pair_kind(r.kind) && r.z.real() != 0.0) curve = on_curve_error(p, r.z);
        d.table.rows.push_back({r.z.real(), r.z.imag(), to_string(r.kind), r.branch, static_cast<long>(r.multiplicity),
                                gamma_relative(p, r.z), curve});
    }
    int code = kOk;
    if (!o.no_check) {
        const auto rep = count_exact(p, o.rmax, false);
        d.extra["oracle_count"] = rep.oracle_count;
        d.extra["exact_count"] = rep.exact_count;
        if (rep.oracle_count != rep.exact_count) {
            err << "consistency failure: solver count " << rep.exact_count << " vs winding count " << rep.oracle_count
                << " for |z| < " << format_double(rep.radius_used) << "\n";
            code = kConsistency;
        }
    }
    emit(d, o.c, out);
    return code;
}

// ---- fig1 ----
struct Fig1Opts {
    Common c;
    int count = 100;
    std::string sidecar;
};

int cmd_fig1(const Fig1Opts& o, std::ostream& out, std::ostream& err) {
    const auto p = o.c.params();
    if (o.count <= 0) throw UsageError("--count must be positive");
    json rows = json::array();
    std::ostringstream plot;
    int bad = 0, found = 0;
    for (long k = p.bc == Boundary::Dirichlet ? 1 : 0; found < o.count; ++k) {
        const cplx z = find_branch(p, k).first.z;
        if (!(z.real() > kPi)) continue;
        ++found;
        const double res = gamma_relative(p, z), curve = on_curve_error(p, z);
        bad += !(res <= 1e-12 && curve <= 1e-10);
        plot << format_double(z.real()) << " " << format_double(z.imag()) << "\n";
        json r = json::object();
        r["re"] = z.real();
        r["im"] = z.imag();
        r["branch"] = k;
        r["gamma_residual"] = res;
        r["on_curve_error"] = curve;
        rows.push_back(std::move(r));
    }
    json side = json::object();
    side["command"] = "fig1";
    json cfg = json::object();
    o.c.put(cfg);
    cfg["count"] = o.count;
    side["config"] = cfg;
    side["rows"] = rows;

    std::string side_path = o.sidecar;
    if (!o.c.out.empty()) {
        std::ofstream f(o.c.out);
        if (!f) throw UsageError("cannot open output file " + o.c.out);
        f << plot.str();
        if (side_path.empty()) side_path = o.c.out + ".json";
    } else {
        out << plot.str();
    }
    if (!side_path.empty()) {
        std::ofstream f(side_path);
        if (!f) throw UsageError("cannot open sidecar file " + side_path);
        dump_json(side, f);
        f << "\n";
    }
    if (bad) {
        err << "consistency failure: " << bad << " rows miss the residual or curve tolerance\n";
        return kConsistency;
    }
    return kOk;
}

// ---- count ----
struct CountOpts {
    Common c;
    double rmax = 100.0;
    std::string grid;
    bool no_check = false;
};

int cmd_count(const CountOpts& o, std::ostream& out, std::ostream& err) {
    const auto p = o.c.params();
    std::vector<double> radii = o.grid.empty() ? std::vector<double>{o.rmax} : parse_list(o.grid, 0, "--grid");
    for (double R : radii)
        if (!(R > 0.0)) throw UsageError("radii must be positive");
    Doc d;
    d.command = "count";
    o.c.put(d.config);
    d.config["rmax"] = o.rmax;
    if (!o.grid.empty()) d.config["grid"] = join(radii);
    d.config["no-check"] = o.no_check;
    d.table.columns = {"R", "exact_count", "asymptotic_count", "oracle_count", "radius_used", "ratio"};
    int code = kOk;
    for (double R : radii) {
        Cell oracle, used;
        long exact = 0;
        if (o.no_check) {
            exact = total_multiplicity(find_all(p, R));
        } else {
            const auto rep = count_exact(p, R, false);
            exact = rep.exact_count;
            oracle = static_cast<long>(rep.oracle_count);
            used = rep.radius_used;
            if (rep.oracle_count != rep.exact_count) {
                err << "consistency failure at R = " << format_double(R) << ": solver " << rep.exact_count
                    << " vs winding " << rep.oracle_count << "\n";
                code = kConsistency;
            }
        }
        const double ratio = exact / (2.0 * p.y3() * R / kPi);
        d.table.rows.push_back({R, exact, static_cast<long>(asymptotic_count(p.y3(), R)), oracle, used, ratio});
    }
    emit(d, o.c, out);
    return code;
}

// ---- semiclassical ----
struct SemiOpts {
    Common c;
    double h = 1e-3;
    double beta = 0.5;
    double eps = 0.5;
    std::string sign = "plus";
    bool sweep = false;
    bool cross_check = false;
};

std::vector<std::pair<std::string, std::vector<BandCheck>>> run_checks(const SemiclassicalParams& sp, double eps) {
    if (sp.beta < 1.0) return {{"band", verify_band_beta_lt1(sp, eps)}};
    return {{"parabola", verify_parabola_beta_gt1(sp, eps)}, {"envelope", verify_envelope_beta_gt1(sp, eps)}};
}

int cmd_semiclassical(const SemiOpts& o, std::ostream& out, std::ostream& err) {
    SemiclassicalParams sp;
    sp.h = o.h;
    sp.beta = o.beta;
    sp.sign = parse_sign(o.sign);
    sp.bc = parse_boundary(o.c.bc);
    sp.y3 = o.c.y3;
    sp.validate();
    if (!(o.eps > 0.0 && o.eps < 1.0)) throw UsageError("--eps must lie in (0, 1)");
    if (o.beta == 1.0) throw UsageError("--beta must differ from 1");
    Doc d;
    d.command = "semiclassical";
    d.config["bc"] = o.c.bc;
    d.config["y3"] = o.c.y3;
    d.config["format"] = o.c.format;
    d.config["h"] = o.h;
    d.config["beta"] = o.beta;
    d.config["eps"] = o.eps;
    d.config["sign"] = o.sign;
    d.config["sweep"] = o.sweep;
    d.config["cross-check"] = o.cross_check;
    int code = kOk;
    if (o.sweep) {
        // Bounds are guaranteed only for h small enough: failures at the
        // smallest h are fatal, others are reported.
        d.table.columns = {"h", "beta", "eps", "check", "roots", "failures", "max_slack", "fatal"};
        const std::vector<double> hs{1e-1, 1e-2, 1e-3};
        for (double h : hs)
            for (double beta : {0.5, 1.5, 2.0})
                for (double eps : {0.25, 0.5}) {
                    SemiclassicalParams q = sp;
                    q.h = h;
                    q.beta = beta;
                    for (const auto& [name, checks] : run_checks(q, eps)) {
                        long fails = 0;
                        double worst = 0.0;
                        for (const auto& b : checks) {
                            fails += !b.ok();
                            worst = std::max(worst, b.slack);
                        }
                        const bool fatal = h == hs.back() && fails > 0;
                        if (fatal) code = kConsistency;
                        d.table.rows.push_back({h, beta, eps, name, static_cast<long>(checks.size()), fails, worst, fatal});
                    }
                }
    } else {
        d.table.columns = {"check", "k", "re", "im", "value", "bound", "slack", "lower_ok", "upper_ok"};
        for (const auto& [name, checks] : run_checks(sp, o.eps))
            for (const auto& b : checks) {
                if (!b.ok()) code = kConsistency;
                d.table.rows.push_back({name, b.k, b.z.real(), b.z.imag(), b.value, b.bound, b.slack, b.lower_ok, b.upper_ok});
            }
    }
    if (o.cross_check) {
        const auto cc = cross_check_solver(sp, o.eps);
        json j = json::object();
        j["lambert_count"] = cc.lambert_count;
        j["solver_count"] = cc.solver_count;
        j["max_rel_diff"] = cc.max_rel_diff;
        j["ok"] = cc.ok;
        d.extra["cross_check"] = j;
        err << "cross-check: " << cc.lambert_count << " Lambert roots, " << cc.solver_count
            << " solver roots, max relative difference " << format_double(cc.max_rel_diff) << "\n";
        if (!cc.ok) code = kConsistency;
    }
    if (code != kOk) err << "consistency failure: a bound check failed\n";
    emit(d, o.c, out);
    return code;
}

// ---- expand ----
struct ExpandOpts {
    Common c;
    double t = 2.0;
    std::string x = "0,0,1.5";
    std::string xp = "0,0,2";
    long nmax = 40;
    std::optional<double> phi;
    double oracle_radius = 10.0;
    bool no_oracle = false;
};

int cmd_expand(const ExpandOpts& o, std::ostream& out, std::ostream& err) {
    const auto p = o.c.params();
    const auto xv = parse_list(o.x, 3, "--x"), xpv = parse_list(o.xp, 3, "--xp");
    const double phi = o.phi.value_or(-kPi / 4.0);
    if (o.nmax < 1) throw UsageError("--nmax must be at least 1");
    const auto k = schrodinger_kernel(p, o.t, to_point(xv), to_point(xpv), o.nmax, phi);
    Doc d;
    d.command = "expand";
    o.c.put(d.config);
    d.config["t"] = o.t;
    d.config["x"] = join(xv);
    d.config["xp"] = join(xpv);
    d.config["nmax"] = o.nmax;
    if (o.phi) d.config["phi"] = *o.phi;
    d.config["oracle-radius"] = o.oracle_radius;
    d.config["no-oracle"] = o.no_oracle;
    d.table.columns = {"term", "re", "im", "abs"};
    auto add = [&](const std::string& name, cplx v) { d.table.rows.push_back({name, v.real(), v.imag(), std::abs(v)}); };
    add("free", k.free_term);
    add("image", k.image_term);
    add("bound", k.bound_term);
    add("residue_sum", k.residue_sum);
    add("background", k.background);
    add("total", k.total);
    d.extra["terms"] = k.terms;
    d.extra["t_min"] = k.t_min;
    d.extra["ray_angle"] = k.ray_angle;
    d.extra["background_error"] = k.background_error;
    int code = kOk;
    if (!o.no_oracle) {
        const auto direct = schrodinger_kernel_direct(p, o.t, to_point(xv), to_point(xpv), o.oracle_radius);
        add("direct", direct.value);
        const double rel = std::abs(k.total - direct.value) / std::abs(direct.value);
        d.extra["oracle_X"] = direct.X;
        d.extra["relative_difference"] = rel;
        if (!(rel <= 1e-6)) {
            err << "consistency failure: expansion and direct contour differ by " << format_double(rel) << "\n";
            code = kConsistency;
        }
    }
    emit(d, o.c, out);
    return code;
}

// ---- oracle ----
struct OracleOpts {
    Common c;
    std::string rect;
};

int cmd_oracle(const OracleOpts& o, std::ostream& out, std::ostream& err) {
    const auto p = o.c.params();
    const auto v = parse_list(o.rect, 4, "--rect");
    Rectangle r{v[0], v[1], v[2], v[3]};
    try {
        r.validate();
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    const auto w = winding_count(p, r);
    Doc d;
    d.command = "oracle";
    o.c.put(d.config);
    d.config["rect"] = join(v);
    d.table.columns = {"re_min", "re_max", "im_min", "im_max", "count", "raw_re", "raw_im", "certified", "nudges",
                       "solver_count", "match"};
    Cell solver, match;
    int code = w.certified ? kOk : kConsistency;
    if (w.rect.im_max <= 0.0) {
        // Zeros with Im z <= 0 are all listed by the solver.
        const double R = std::hypot(std::max(std::abs(w.rect.re_min), std::abs(w.rect.re_max)),
                                    std::max(std::abs(w.rect.im_min), std::abs(w.rect.im_max))) + 1.0;
        long n = 0;
        for (const auto& z : find_all(p, R))
            if (z.z.real() > w.rect.re_min && z.z.real() < w.rect.re_max && z.z.imag() > w.rect.im_min &&
                z.z.imag() < w.rect.im_max)
                n += z.multiplicity;
        solver = n;
        match = n == w.count;
        if (n != w.count) code = kConsistency;
    }
    d.table.rows.push_back({w.rect.re_min, w.rect.re_max, w.rect.im_min, w.rect.im_max, static_cast<long>(w.count),
                            w.raw.real(), w.raw.imag(), w.certified, static_cast<long>(w.nudges), solver, match});
    if (code != kOk) err << "consistency failure: winding count not certified or differs from the solver\n";
    emit(d, o.c, out);
    return code;
}

const std::set<std::string> kFlags{"no-check", "sweep", "cross-check", "no-oracle"};

bool mentions(const std::vector<std::string>& args, const std::string& key) {
    const std::string f = "--" + key;
    for (const auto& a : args)
        if (a == f || a.rfind(f + "=", 0) == 0) return true;
    return false;
}

std::optional<std::string> config_path(const std::vector<std::string>& args) {
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--config" && i + 1 < args.size()) return args[i + 1];
        if (args[i].rfind("--config=", 0) == 0) return args[i].substr(9);
    }
    return std::nullopt;
}

// Config values become flags placed right after the subcommand; explicit flags win.
std::vector<std::string> merge_config(const std::vector<std::string>& args) {
    const auto path = config_path(args);
    if (!path || args.empty()) return args;
    std::ifstream f(*path);
    if (!f) throw UsageError("cannot read config file " + *path);
    std::stringstream ss;
    ss << f.rdbuf();
    std::vector<std::string> extra;
    for (const auto& [k, v] : parse_config(ss.str())) {
        if (k == "command") {
            if (v != args[0]) throw UsageError("config is for '" + v + "', not '" + args[0] + "'");
            continue;
        }
        if (k == "config" || k == "out" || mentions(args, k)) continue;
        if (kFlags.count(k)) {
            if (v == "true") extra.push_back("--" + k);
            else if (v != "false") throw UsageError("flag " + k + " needs true or false");
            continue;
        }
        extra.push_back("--" + k);
        extra.push_back(v);
    }
    std::vector<std::string> merged{args[0]};
    merged.insert(merged.end(), extra.begin(), extra.end());
    merged.insert(merged.end(), args.begin() + 1, args.end());
    return merged;
}

}  // namespace

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

double parse_alpha(const std::string& text, const std::string& bc, double y3) {
    if (!(y3 > 0.0) || !std::isfinite(y3)) throw std::invalid_argument("y3 must be positive");
    const std::string t = trim(text);
    const double unit = 1.0 / (8.0 * kPi * y3);
    if (t == "critical-" || t == "critical\xe2\x88\x92") return -unit;
    if (t == "critical+") return unit;
    if (t == "critical") return critical_alpha(parse_boundary(bc), y3);
    if (t.rfind("lnpi2k:", 0) == 0) {
        const std::string ks = t.substr(7);
        std::size_t pos = 0;
        long k = 0;
        try {
            k = std::stol(ks, &pos);
        } catch (const std::exception&) {
            throw UsageError("bad lnpi2k tag: " + t);
        }
        if (pos != ks.size()) throw UsageError("bad lnpi2k tag: " + t);
        return std::log(std::abs(kPi / 2.0 + k * kPi)) * unit;
    }
    return parse_number(t, "--alpha");
}

std::vector<std::pair<std::string, std::string>> parse_config(const std::string& text) {
    std::vector<std::pair<std::string, std::string>> out;
    const std::string body = trim(text);
    if (!body.empty() && body[0] == '{') {
        json j;
        try {
            j = json::parse(body);
        } catch (const json::exception& e) {
            throw UsageError(std::string("bad JSON config: ") + e.what());
        }
        if (j.contains("config") && j["config"].is_object()) {
            if (j.contains("command") && j["command"].is_string()) out.emplace_back("command", j["command"].get<std::string>());
            j = j["config"];
        }
        for (auto it = j.begin(); it != j.end(); ++it) {
            const auto& v = it.value();
            std::string s;
            if (v.is_string()) s = v.get<std::string>();
            else if (v.is_boolean()) s = v.get<bool>() ? "true" : "false";
            else if (v.is_number_integer()) s = std::to_string(v.get<long long>());
            else if (v.is_number()) s = format_double(v.get<double>());
            else throw UsageError("config value for " + it.key() + " must be a scalar");
            out.emplace_back(it.key(), s);
        }
        return out;
    }
    std::stringstream ss(text);
    std::string line;
    int n = 0;
    while (std::getline(ss, line)) {
        ++n;
        const std::string l = trim(line);
        if (l.empty() || l[0] == '#') continue;
        const auto eq = l.find('=');
        if (eq == std::string::npos) throw UsageError("config line " + std::to_string(n) + " lacks '='");
        out.emplace_back(trim(l.substr(0, eq)), trim(l.substr(eq + 1)));
    }
    return out;
}

int run(const std::vector<std::string>& raw, std::ostream& out, std::ostream& err) {
    CLI::App app{"Resonances of a point interaction in a half-space", "resonance"};
    app.require_subcommand(1);

    FindOpts fo;
    auto* find = app.add_subcommand("find", "list resonances with |z| < rmax");
    fo.c.attach(find);
    find->add_option("--rmax", fo.rmax, "radius");
    find->add_flag("--no-check", fo.no_check, "skip the winding-number count");

    Fig1Opts f1;
    f1.c.bc = "dirichlet";
    auto* fig1 = app.add_subcommand("fig1", "first resonances with Re z > pi as plot data");
    f1.c.attach(fig1, false);
    fig1->add_option("--count", f1.count, "number of rows");
    fig1->add_option("--sidecar", f1.sidecar, "JSON sidecar path (default <out>.json)");

    CountOpts co;
    auto* count = app.add_subcommand("count", "resonance counts in |z| < R");
    co.c.attach(count);
    count->add_option("--rmax", co.rmax, "radius");
    count->add_option("--grid", co.grid, "comma-separated radii (overrides --rmax)");
    count->add_flag("--no-check", co.no_check, "skip the winding-number count");

    SemiOpts so;
    auto* semi = app.add_subcommand("semiclassical", "Lambert-built resonances and their bounds");
    so.c.attach(semi);
    semi->set_help_flag("--help", "print this help message and exit");
    semi->add_option("--h", so.h, "semiclassical parameter");
    semi->add_option("--beta", so.beta, "coupling exponent");
    semi->add_option("--eps", so.eps, "window parameter");
    semi->add_option("--sign", so.sign, "plus or minus")->check(CLI::IsMember({"plus", "minus"}));
    semi->add_flag("--sweep", so.sweep, "run the h, beta, eps grid");
    semi->add_flag("--cross-check", so.cross_check, "compare with the direct solver");

    ExpandOpts eo;
    auto* expand = app.add_subcommand("expand", "resonance expansion of the Schrodinger kernel");
    eo.c.attach(expand);
    expand->add_option("--t", eo.t, "time");
    expand->add_option("--x", eo.x, "x as a,b,c");
    expand->add_option("--xp", eo.xp, "x' as a,b,c");
    expand->add_option("--nmax", eo.nmax, "highest branch in the residue sum");
    expand->add_option("--phi", eo.phi, "background ray angle (default -pi/4)");
    expand->add_option("--oracle-radius", eo.oracle_radius, "X for the direct contour");
    expand->add_flag("--no-oracle", eo.no_oracle, "skip the direct contour");

    OracleOpts oo;
    auto* oracle = app.add_subcommand("oracle", "argument-principle count in a rectangle");
    oo.c.attach(oracle);
    oracle->add_option("--rect", oo.rect, "re_min,re_max,im_min,im_max")->required();

    try {
        auto args = merge_config(raw);
        std::reverse(args.begin(), args.end());
        app.parse(args);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << "\n";
        return kUsage;
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << "\n";
        return kUsage;
    }

    for (Common* c : {&fo.c, &f1.c, &co.c, &so.c, &eo.c, &oo.c}) {
        std::transform(c->bc.begin(), c->bc.end(), c->bc.begin(), [](unsigned char ch) { return std::tolower(ch); });
    }

    try {
        if (find->parsed()) return cmd_find(fo, out, err);
        if (fig1->parsed()) return cmd_fig1(f1, out, err);
        if (count->parsed()) return cmd_count(co, out, err);
        if (semi->parsed()) return cmd_semiclassical(so, out, err);
        if (expand->parsed()) return cmd_expand(eo, out, err);
        if (oracle->parsed()) return cmd_oracle(oo, out, err);
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << "\n";
        return kUsage;
    } catch (const std::logic_error& e) {
        // invalid_argument, domain_error and friends: bad parameters.
        err << "usage error: " << e.what() << "\n";
        return kUsage;
    } catch (const ExpansionError& e) {
        err << "usage error: " << e.what() << "\n";
        return kUsage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kConsistency;
    }
    return kUsage;
}

}  // namespace hsres::cli
