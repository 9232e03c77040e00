// rmdirac: spectra, sweeps, wavefunctions and numerical checks for the Dirac
// Rosen-Morse problem with a Coulomb-like tensor term.
//
// Exit codes: 0 success, 2 a requested level has no root, 3 bad arguments.

#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "rmdirac/dirac_rm.hpp"
#include "rmdirac/oracle.hpp"
#include "rmdirac/pekeris.hpp"
#include "rmdirac/tables.hpp"

using namespace rmdirac;

namespace {

constexpr int exit_missing = 2;
constexpr int exit_usage = 3;

struct Config
{
    Symmetry symmetry = Symmetry::spin;
    double m = 1.0, v1 = 1.0, v2 = -1.0, alpha = 0.25, re = 2.197224577;
    double cs = 0.0, cps = -6.0, h = 0.5;
    std::optional<int> n, kappa;
    std::vector<double> window;
    double tol = 1e-10;
    EnergyVariant variant = EnergyVariant::derivation;
    RootBranch branch = RootBranch::normalizable;
    std::string out;
    std::string format = "csv";

    // sweep
    std::string param = "H";
    std::optional<double> from, to;
    int steps = 11;
    std::vector<std::string> states;

    // wavefunction
    std::optional<double> r_max;
    int points = 2000;

    CLI::Option* h_opt = nullptr;

    ModelParams params() const
    {
        ModelParams p;
        p.mass = m;
        p.v1 = v1;
        p.v2 = v2;
        p.alpha = alpha;
        p.r_e = re;
        p.tensor_h = h;
        p.symmetry = symmetry;
        p.symmetry_constant = symmetry == Symmetry::spin ? cs : cps;
        return p;
    }

    SolveOptions solve_options() const
    {
        SolveOptions o;
        if (window.size() == 2) {
            o.window = std::make_pair(window[0], window[1]);
        }
        o.tol = tol;
        o.variant = variant;
        o.branch = branch;
        return o;
    }
};

void add_model_flags(CLI::App* sub, Config& c)
{
    std::map<std::string, Symmetry> const sym{{"spin", Symmetry::spin}, {"pspin", Symmetry::pseudospin}};
    std::map<std::string, EnergyVariant> const var{{"derivation", EnergyVariant::derivation},
                                                   {"printed", EnergyVariant::printed}};
    std::map<std::string, RootBranch> const br{{"normalizable", RootBranch::normalizable},
                                               {"printed", RootBranch::printed}};
    sub->add_option("--symmetry", c.symmetry, "spin or pspin")->transform(CLI::CheckedTransformer(sym));
    sub->add_option("--m", c.m, "mass (fm^-1)");
    sub->add_option("--v1", c.v1, "V1 (fm^-1)");
    sub->add_option("--v2", c.v2, "V2 (fm^-1)");
    sub->add_option("--alpha", c.alpha, "screening parameter (fm^-1)");
    sub->add_option("--re", c.re, "matching radius r_e (fm)");
    sub->add_option("--cs", c.cs, "C_s (fm^-1)");
    sub->add_option("--cps", c.cps, "C_ps (fm^-1)");
    c.h_opt = sub->add_option("--tensor-h", c.h, "tensor strength H");
    sub->add_option("--window", c.window, "energy search window: lo hi")->expected(2);
    sub->add_option("--tol", c.tol, "bisection tolerance (fm^-1)")->check(CLI::PositiveNumber);
    sub->add_option("--variant", c.variant, "derivation or printed")->transform(CLI::CheckedTransformer(var));
    sub->add_option("--branch", c.branch, "normalizable or printed")->transform(CLI::CheckedTransformer(br));
    sub->add_option("--out", c.out, "output file (default stdout)");
    sub->add_option("--format", c.format, "csv or table")->check(CLI::IsMember({"csv", "table"}));
}

// Rows of strings, written as CSV or as an aligned table.
void emit(std::ostream& os, std::vector<std::vector<std::string>> const& rows, std::string const& format)
{
    if (format == "csv") {
        for (auto const& row : rows) {
            for (std::size_t i = 0; i < row.size(); ++i) {
                os << (i ? "," : "") << row[i];
            }
            os << '\n';
        }
        return;
    }
    std::vector<std::size_t> width;
    for (auto const& row : rows) {
        width.resize(std::max(width.size(), row.size()), 0);
        for (std::size_t i = 0; i < row.size(); ++i) {
            width[i] = std::max(width[i], row[i].size());
        }
    }
    for (auto const& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            os << (i ? "  " : "") << std::setw(static_cast<int>(width[i])) << row[i];
        }
        os << '\n';
    }
}

std::string num(double v)
{
    std::ostringstream s;
    s << std::setprecision(10) << v;
    return s.str();
}

struct Output
{
    std::ofstream file;
    std::ostream* os = &std::cout;

    explicit Output(std::string const& path)
    {
        if (!path.empty()) {
            file.open(path);
            if (!file) {
                throw std::invalid_argument("cannot open output file " + path);
            }
            os = &file;
        }
    }
};

std::optional<double> energy_at(QuantumNumbers const& qn, ModelParams p, double h, SolveOptions const& opt)
{
    p.tensor_h = h;
    auto const s = solve_level(qn, p, opt);
    if (!s) {
        return std::nullopt;
    }
    return s->energy;
}

int run_spectrum(Config const& c)
{
    ModelParams const p = c.params();
    p.validate();
    std::vector<QuantumNumbers> list;
    if (c.n || c.kappa) {
        if (!c.n || !c.kappa) {
            throw std::invalid_argument("spectrum: --n and --kappa go together");
        }
        list.push_back(from_printed_index(*c.n, *c.kappa, c.symmetry));
    } else {
        for (auto const& lv : reference_levels(c.symmetry)) {
            list.push_back(from_printed_index(lv.printed_n, lv.kappa, c.symmetry));
        }
    }
    std::vector<std::vector<std::string>> rows{{"n", "kappa", "label", "E_h", "E_h0"}};
    bool missing = false;
    auto const opt = c.solve_options();
    for (auto const& qn : list) {
        qn.validate();
        auto const e = energy_at(qn, p, c.h, opt);
        auto const e0 = energy_at(qn, p, 0.0, opt);
        missing = missing || !e || !e0;
        rows.push_back({std::to_string(printed_radial_index(qn, c.symmetry)), std::to_string(qn.kappa),
                        compact_label(qn, c.symmetry), e ? num(*e) : "", e0 ? num(*e0) : ""});
    }
    Output out(c.out);
    emit(*out.os, rows, c.format);
    return missing ? exit_missing : 0;
}

int run_sweep(Config c)
{
    bool const by_alpha = c.param == "alpha";
    if (by_alpha && c.symmetry == Symmetry::spin && c.h_opt->count() == 0) {
        c.h = 5.0;
    }
    double const from = c.from.value_or(by_alpha ? 0.1 : 0.0);
    double const to = c.to.value_or(by_alpha ? 0.35 : 1.0);
    if (!(from < to) || c.steps < 2) {
        throw std::invalid_argument("sweep: require from < to and steps >= 2");
    }
    std::vector<std::string> labels = c.states;
    if (labels.empty()) {
        labels = c.symmetry == Symmetry::spin ? std::vector<std::string>{"1p1/2", "1p3/2"}
                                              : std::vector<std::string>{"1d5/2", "0g7/2"};
    }
    std::vector<QuantumNumbers> qns;
    for (auto const& l : labels) {
        qns.push_back(parse_label(l, c.symmetry));
    }
    auto const opt = c.solve_options();
    std::vector<std::vector<std::string>> rows{{"param", "state", "E"}};
    bool missing = false;
    for (int i = 0; i < c.steps; ++i) {
        double const x = from + (to - from) * i / (c.steps - 1);
        Config at = c;
        if (by_alpha) {
            at.alpha = x;
        } else {
            at.h = x;
        }
        ModelParams const p = at.params();
        p.validate();
        for (auto const& qn : qns) {
            auto const e = energy_at(qn, p, p.tensor_h, opt);
            missing = missing || !e;
            rows.push_back({num(x), compact_label(qn, c.symmetry), e ? num(*e) : ""});
        }
    }
    Output out(c.out);
    emit(*out.os, rows, c.format);
    return missing ? exit_missing : 0;
}

std::optional<BoundState> requested_state(Config const& c)
{
    if (!c.n || !c.kappa) {
        throw std::invalid_argument("--n and --kappa are required");
    }
    QuantumNumbers const qn = from_printed_index(*c.n, *c.kappa, c.symmetry);
    qn.validate();
    ModelParams const p = c.params();
    p.validate();
    return solve_level(qn, p, c.solve_options());
}

int run_wavefunction(Config const& c)
{
    auto const s = requested_state(c);
    if (!s) {
        std::cerr << "no bound state for this level\n";
        return exit_missing;
    }
    RadialGrid grid = default_grid(*s);
    if (c.r_max) {
        grid.r_max = *c.r_max;
    }
    grid.points = c.points;
    grid.validate();
    BoundState const st = normalize(*s, grid);

    std::vector<double> f, g;
    std::vector<std::vector<std::string>> rows{{"r", "F", "G"}};
    for (int i = 0; i < grid.points; ++i) {
        double const r = grid.at(i);
        auto const v = radial_components(st, r);
        f.push_back(v.f);
        g.push_back(v.g);
        rows.push_back({num(r), num(v.f), num(v.g)});
    }
    // Summary goes to stdout unless the CSV itself does.
    std::ostream& info = c.out.empty() ? std::cerr : std::cout;
    info << "E = " << num(st.energy) << '\n'
         << "nodes F = " << count_nodes(f) << '\n'
         << "nodes G = " << count_nodes(g) << '\n';
    Output out(c.out);
    emit(*out.os, rows, c.format);
    return 0;
}

std::string table_variant_match(QuantumNumbers const& qn, Config const& c)
{
    ModelParams const p = c.params();
    auto const ref = reference_energy(qn, c.symmetry, p.tensor_h);
    if (!ref || p.mass != 1.0 || p.v1 != 1.0 || p.v2 != -1.0 || p.alpha != 0.25 || p.r_e != 2.197224577 ||
        p.symmetry_constant != (c.symmetry == Symmetry::spin ? 0.0 : -6.0)) {
        return "n/a";
    }
    std::string best = "none";
    double best_dev = 1e-3;
    for (auto v : {EnergyVariant::derivation, EnergyVariant::printed}) {
        for (auto b : {RootBranch::normalizable, RootBranch::printed}) {
            SolveOptions o = c.solve_options();
            o.variant = v;
            o.branch = b;
            for (auto const& s : solve_levels(qn, p, o)) {
                double const dev = std::abs(s.energy - *ref);
                if (dev <= best_dev) {
                    best_dev = dev;
                    best = std::string(to_string(v)) + "/" + to_string(b);
                }
            }
        }
    }
    return best;
}

int run_verify(Config const& c)
{
    auto const s = requested_state(c);
    if (!s) {
        std::cerr << "no bound state for this level\n";
        return exit_missing;
    }
    auto const pek = oracle_report(*s, OracleMode::pekeris);
    auto const ex = oracle_report(*s, OracleMode::exact, 0.5);
    auto shown = [](ShootResult const& r) { return r.status == ShootStatus::found ? num(r.energy) : to_string(r.status); };
    std::vector<std::vector<std::string>> rows{
        {"field", "value"},
        {"label", compact_label(s->qn, c.symmetry)},
        {"variant", to_string(s->variant)},
        {"branch", to_string(s->branch)},
        {"E_analytic", num(s->energy)},
        {"E_pekeris", shown(pek.numeric)},
        {"E_exact", shown(ex.numeric)},
        {"dE_pekeris", pek.numeric.status == ShootStatus::found ? num(pek.numeric.energy - s->energy) : ""},
        {"dE_exact", ex.numeric.status == ShootStatus::found ? num(ex.numeric.energy - s->energy) : ""},
        {"max_ode_residual", num(pek.max_ode_residual)},
        {"nodes", std::to_string(pek.nodes)},
        {"table_variant", table_variant_match(s->qn, c)},
    };
    Output out(c.out);
    emit(*out.os, rows, c.format);
    return 0;
}

int run_pekeris(Config const& c)
{
    auto const k = pekeris_coefficients(c.alpha, c.re);
    double const u = pekeris_variable(c.re, c.alpha);
    auto const res = matching_residuals(k);
    std::vector<std::vector<std::string>> rows{
        {"field", "value"},       {"D0", num(k.d0)},
        {"D1", num(k.d1)},        {"D2", num(k.d2)},
        {"u_e", num(u)},          {"g_value_residual", num(res[0])},
        {"g_slope_residual", num(res[1])}, {"g_curvature_residual", num(res[2])},
        {"D0+D1*u_e+D2*u_e^2", num(k.d0 + k.d1 * u + k.d2 * u * u)},
    };
    Output out(c.out);
    emit(*out.os, rows, c.format);
    return 0;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Dirac Rosen-Morse spectra with a Coulomb-like tensor term"};
    app.require_subcommand(1);
    Config c;

    auto* spectrum = app.add_subcommand("spectrum", "energy levels at H and at H = 0");
    add_model_flags(spectrum, c);
    spectrum->add_option("--n", c.n, "printed radial index");
    spectrum->add_option("--kappa", c.kappa, "spin-orbit quantum number");

    auto* sweep = app.add_subcommand("sweep", "energies along H or alpha");
    add_model_flags(sweep, c);
    sweep->add_option("--param", c.param, "H or alpha")->check(CLI::IsMember({"H", "alpha"}));
    sweep->add_option("--from", c.from, "start value");
    sweep->add_option("--to", c.to, "end value");
    sweep->add_option("--steps", c.steps, "number of points");
    sweep->add_option("--states", c.states, "labels such as 1d5/2,0g7/2")->delimiter(',');

    auto* wave = app.add_subcommand("wavefunction", "normalized F and G on a grid");
    add_model_flags(wave, c);
    wave->add_option("--n", c.n, "printed radial index");
    wave->add_option("--kappa", c.kappa, "spin-orbit quantum number");
    wave->add_option("--r-max", c.r_max, "grid end (fm)");
    wave->add_option("--points", c.points, "grid points")->check(CLI::Range(2, 10000000));

    auto* verify = app.add_subcommand("verify", "numerical checks of one level");
    add_model_flags(verify, c);
    verify->add_option("--n", c.n, "printed radial index");
    verify->add_option("--kappa", c.kappa, "spin-orbit quantum number");

    auto* pek = app.add_subcommand("pekeris", "coefficients of the 1/r^2 approximant");
    add_model_flags(pek, c);

    try {
        app.parse(argc, argv);
    } catch (CLI::ParseError const& e) {
        if (e.get_exit_code() == 0) {
            return app.exit(e);
        }
        app.exit(e);
        return exit_usage;
    }

    try {
        if (*spectrum) return run_spectrum(c);
        if (*sweep) return run_sweep(c);
        if (*wave) return run_wavefunction(c);
        if (*verify) return run_verify(c);
        return run_pekeris(c);
    } catch (std::invalid_argument const& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_usage;
    } catch (std::domain_error const& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_usage;
    } catch (std::exception const& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
