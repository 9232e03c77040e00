// Acceptance run: one PASS/FAIL line per criterion on stdout, details on
// stderr. Exit status is nonzero when any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <limits>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "rmdirac/dirac_rm.hpp"
#include "rmdirac/nu.hpp"
#include "rmdirac/oracle.hpp"
#include "rmdirac/pekeris.hpp"
#include "rmdirac/tables.hpp"

using namespace rmdirac;

namespace {

struct GoldenRow
{
    int printed_n;
    int kappa;
    std::string label;
    double e_h;
    double e_h0;
};

std::vector<GoldenRow> load_golden(std::string const& name)
{
    std::ifstream in(std::string(RMDIRAC_GOLDEN) + "/" + name);
    if (!in) {
        throw std::runtime_error("missing golden file " + name);
    }
    std::vector<GoldenRow> rows;
    std::string line;
    std::getline(in, line);
    while (std::getline(in, line)) {
        if (line.empty()) {
            continue;
        }
        std::istringstream ls(line);
        std::string cell;
        std::vector<std::string> c;
        while (std::getline(ls, cell, ',')) {
            c.push_back(cell);
        }
        rows.push_back({std::stoi(c[0]), std::stoi(c[1]), c[2], std::stod(c[3]), std::stod(c[4])});
    }
    return rows;
}

// One tabulated energy: a state at one tensor strength.
struct Entry
{
    Symmetry sym;
    int printed_n;
    int kappa;
    std::string label;
    double h;
    double e_ref;
};

std::vector<Entry> entries(Symmetry sym, std::vector<GoldenRow> const& rows)
{
    std::vector<Entry> out;
    for (auto const& r : rows) {
        out.push_back({sym, r.printed_n, r.kappa, r.label, 0.5, r.e_h});
        out.push_back({sym, r.printed_n, r.kappa, r.label, 0.0, r.e_h0});
    }
    return out;
}

// Radial index of the energy equation under either candidate convention.
QuantumNumbers formula_qn(Entry const& e, bool shift_positive_kappa)
{
    QuantumNumbers q{e.printed_n, e.kappa};
    if (e.sym == Symmetry::pseudospin && shift_positive_kappa && e.kappa > 0) {
        q.n += 1;
    }
    return q;
}

ModelParams params_for(Entry const& e)
{
    ModelParams p = ModelParams::reference(e.sym);
    p.tensor_h = e.h;
    return p;
}

std::string fmt(double v, int prec = 4)
{
    std::ostringstream s;
    s << std::setprecision(prec) << v;
    return s.str();
}

int failures = 0;

void verdict(int id, bool pass, std::string const& what)
{
    std::cout << (pass ? "PASS" : "FAIL") << " criterion " << id << ": " << what << std::endl;
    failures += pass ? 0 : 1;
}

struct TableFit
{
    std::string name;
    int missing = 0;
    double max_dev = 0.0;
    double max_dev_nearest = 0.0;
};

TableFit fit_table(std::vector<Entry> const& es, EnergyVariant v, RootBranch b, bool shift)
{
    TableFit f;
    f.name = std::string(to_string(v)) + "/" + to_string(b) + (shift ? "/n+1" : "/n");
    SolveOptions o;
    o.variant = v;
    o.branch = b;
    for (auto const& e : es) {
        auto const all = solve_levels(formula_qn(e, shift), params_for(e), o);
        if (all.empty()) {
            ++f.missing;
            continue;
        }
        f.max_dev = std::max(f.max_dev, std::abs(all.back().energy - e.e_ref));
        double nearest = std::numeric_limits<double>::infinity();
        for (auto const& s : all) {
            nearest = std::min(nearest, std::abs(s.energy - e.e_ref));
        }
        f.max_dev_nearest = std::max(f.max_dev_nearest, nearest);
    }
    return f;
}

// Criteria 1 and 2. The reported energy is the highest admissible root, the
// one the spectrum command prints.
void check_table(int id, std::string const& title, std::vector<Entry> const& es, std::vector<bool> const& conventions)
{
    auto const t0 = std::chrono::steady_clock::now();
    std::optional<TableFit> best;
    for (bool shift : conventions) {
        for (auto v : {EnergyVariant::derivation, EnergyVariant::printed}) {
            for (auto b : {RootBranch::normalizable, RootBranch::printed}) {
                auto const f = fit_table(es, v, b, shift);
                std::cerr << "  [" << id << "] " << f.name << ": missing " << f.missing << "/" << es.size()
                          << ", max|dE| " << fmt(f.max_dev) << " (nearest root " << fmt(f.max_dev_nearest) << ")\n";
                if (!best || f.missing < best->missing || (f.missing == best->missing && f.max_dev < best->max_dev)) {
                    best = f;
                }
            }
        }
    }
    double const secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    int const combos = static_cast<int>(conventions.size()) * 4;
    bool const fast = secs / combos <= 5.0;
    bool const exact = best->missing == 0 && best->max_dev <= 1e-6;
    bool const loose = best->missing == 0 && best->max_dev <= 1e-3;
    std::string detail = title + ", best " + best->name + ": missing " + std::to_string(best->missing) + "/" +
                         std::to_string(es.size()) + ", max|dE| " + fmt(best->max_dev) + " fm^-1, " +
                         fmt(secs / combos, 2) + " s per variant";
    if (!exact && loose) {
        detail += " (within 1e-3 only; see README discrepancy notes)";
    }
    verdict(id, (exact || loose) && fast, detail);
}

std::vector<double> scan_grid(ModelParams const& p)
{
    auto const [lo, hi] = default_window(p);
    std::vector<double> g;
    for (double e = lo; e <= hi; e += 1e-3) {
        g.push_back(e);
    }
    return g;
}

void check_degeneracy(std::vector<Entry> const& spin, std::vector<Entry> const& pspin)
{
    double worst_res = 0.0;
    double worst_e = 0.0;
    int pairs = 0, unsolved = 0, shape_mismatch = 0;
    auto compare = [&](Symmetry sym, QuantumNumbers a, QuantumNumbers b) {
        ModelParams p = ModelParams::reference(sym);
        p.tensor_h = 0.0;
        auto const k = pekeris_coefficients(p.alpha, p.r_e);
        for (auto v : {EnergyVariant::derivation, EnergyVariant::printed}) {
            for (auto br : {RootBranch::normalizable, RootBranch::printed}) {
                for (double e : scan_grid(p)) {
                    auto const ra = energy_residual(e, a, p, k, v, br);
                    auto const rb = energy_residual(e, b, p, k, v, br);
                    if (ra.has_value() != rb.has_value()) {
                        ++shape_mismatch;
                    } else if (ra) {
                        worst_res = std::max(worst_res, std::abs(*ra - *rb));
                    }
                }
            }
        }
        auto const sa = solve_level(a, p);
        auto const sb = solve_level(b, p);
        if (!sa || !sb) {
            ++unsolved;
        } else {
            worst_e = std::max(worst_e, std::abs(sa->energy - sb->energy));
        }
        ++pairs;
    };
    for (auto const& e : spin) {
        if (e.h == 0.0 && e.kappa < 0) {
            compare(Symmetry::spin, {e.printed_n, e.kappa}, {e.printed_n, -e.kappa - 1});
        }
    }
    for (auto const& e : pspin) {
        if (e.h == 0.0 && e.kappa < 0) {
            compare(Symmetry::pseudospin, {e.printed_n, e.kappa}, {e.printed_n, 1 - e.kappa});
        }
    }
    bool const pass = worst_res <= 1e-12 && shape_mismatch == 0 && unsolved == 0 && worst_e <= 1e-9;
    verdict(3, pass,
            "H=0 doublets, " + std::to_string(pairs) + " pairs: max residual diff " + fmt(worst_res) +
                ", validity mismatches " + std::to_string(shape_mismatch) + ", unsolved " + std::to_string(unsolved) +
                ", max |dE| " + fmt(worst_e));
}

void check_mapping()
{
    std::mt19937 rng(20240607);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    int compared = 0, mismatched_validity = 0;
    double worst = 0.0;
    for (int set = 0; set < 50; ++set) {
        ModelParams ps;
        ps.symmetry = Symmetry::pseudospin;
        ps.mass = 1.0 + 0.5 * u(rng);
        ps.v1 = 2.0 * u(rng);
        ps.v2 = 2.0 * u(rng);
        ps.alpha = 0.3 + 0.2 * u(rng);
        ps.r_e = 2.5 + 1.5 * u(rng);
        ps.tensor_h = 1.0 + u(rng);
        ps.symmetry_constant = -5.0 + 4.0 * u(rng);
        int const kappa = (set % 2 ? 1 : -1) * (1 + set % 5);
        int const n = set % 3;
        double const omega_bar = coupling_omega(kappa, ps.tensor_h, Symmetry::pseudospin);

        ModelParams sp = ps;
        sp.symmetry = Symmetry::spin;
        sp.v1 = -ps.v1;
        sp.v2 = -ps.v2;
        sp.symmetry_constant = -ps.symmetry_constant;
        auto const k = pekeris_coefficients(ps.alpha, ps.r_e);
        for (int i = 0; i < 20; ++i) {
            double const e = 6.0 * u(rng);
            for (auto v : {EnergyVariant::derivation, EnergyVariant::printed}) {
                for (auto b : {RootBranch::normalizable, RootBranch::printed}) {
                    auto const a = energy_residual(e, n, omega_bar, ps, k, v, b);
                    auto const s = energy_residual(-e, n, omega_bar, sp, k, v, b);
                    if (a.has_value() != s.has_value()) {
                        ++mismatched_validity;
                    } else if (a) {
                        ++compared;
                        worst = std::max(worst, std::abs(*a - *s) / std::max(1.0, std::abs(*a)));
                    }
                }
            }
        }
    }
    verdict(4, worst <= 1e-12 && mismatched_validity == 0 && compared >= 50,
            "50 random sets, " + std::to_string(compared) + " residual pairs, max rel diff " + fmt(worst) +
                ", validity mismatches " + std::to_string(mismatched_validity));
}

struct Solved
{
    Entry entry;
    std::optional<BoundState> state;
};

std::vector<Solved> solve_entries(std::vector<Entry> const& es)
{
    std::vector<Solved> out;
    for (auto const& e : es) {
        auto s = solve_level(formula_qn(e, true), params_for(e));
        if (s) {
            s = normalize(*s, default_grid(*s));
        }
        out.push_back({e, s});
    }
    return out;
}

std::string entry_name(Entry const& e)
{
    return std::string(to_string(e.sym)) + " " + e.label + " H=" + fmt(e.h, 2);
}

void check_oracle(std::vector<Solved> const& all)
{
    int missing = 0, bad_res = 0, bad_shoot = 0;
    double worst_res = 0.0, worst_shoot = 0.0;
    ShootOptions opt;
    opt.scan_segments = 8;
    for (auto const& s : all) {
        if (!s.state) {
            ++missing;
            std::cerr << "  [5] no level: " << entry_name(s.entry) << "\n";
            continue;
        }
        RadialGrid g = default_grid(*s.state);
        double const res = ode_residual(*s.state, g);
        auto const r = shoot_eigenvalue(s.state->params, s.state->qn, OracleMode::pekeris,
                                         {s.state->energy - 0.01, s.state->energy + 0.01}, opt);
        double const dev = r.status == ShootStatus::found ? std::abs(r.energy - s.state->energy)
                                                          : std::numeric_limits<double>::infinity();
        worst_res = std::max(worst_res, res);
        worst_shoot = std::max(worst_shoot, dev);
        bad_res += res > 1e-6;
        bad_shoot += dev > 1e-6;
    }
    verdict(5, missing == 0 && bad_res == 0 && bad_shoot == 0,
            std::to_string(all.size()) + " tabulated entries: unsolved " + std::to_string(missing) +
                ", max ODE residual " + fmt(worst_res) + ", max |E_shoot - E| " + fmt(worst_shoot));
}

// Root of f in [a, b] by bisection; std::nullopt without a valid sign change.
std::optional<double> bisect(std::function<std::optional<double>(double)> const& f, double a, double b, double tol)
{
    auto fa = f(a);
    auto fb = f(b);
    if (!fa || !fb || ((*fa < 0.0) == (*fb < 0.0))) {
        return std::nullopt;
    }
    while (b - a > tol) {
        double const m = 0.5 * (a + b);
        auto const fm = f(m);
        if (!fm) {
            return std::nullopt;
        }
        if ((*fm < 0.0) == (*fa < 0.0)) {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    return 0.5 * (a + b);
}

void check_nu(std::vector<Solved> const& all)
{
    int checked = 0, failed = 0;
    double worst = 0.0;
    for (auto const& s : all) {
        if (!s.state) {
            continue;
        }
        BoundState const& st = *s.state;
        int const sign10 = st.exponent + 0.5 >= 0.0 ? +1 : -1;
        auto nu_residual = [&](double e) -> std::optional<double> {
            auto const t = level_terms(e, st.qn, st.params, st.coeffs, st.branch);
            if (!t) {
                return std::nullopt;
            }
            NuInput const in{1, 1, 1, 1, t->beta1, t->beta2, t->epsilon_sq};
            auto const d = derive_constants(in, {+1, sign10});
            if (!d) {
                return std::nullopt;
            }
            return quantization_residual(in, *d, st.qn.n);
        };
        auto const root = bisect(nu_residual, st.energy - 1e-3, st.energy + 1e-3, 1e-13);
        ++checked;
        if (!root) {
            ++failed;
            continue;
        }
        worst = std::max(worst, std::abs(*root - st.energy));
        failed += std::abs(*root - st.energy) > 1e-10;
    }
    verdict(6, checked > 0 && failed == 0,
            std::to_string(checked) + " solved entries: generic quantization roots vs energy equation, max |dE| " +
                fmt(worst) + ", failures " + std::to_string(failed));
}

void check_wavefunctions(std::vector<Solved> const& all)
{
    int checked = 0, bad_lower = 0, bad_norm = 0, bad_nodes = 0, missing = 0;
    double worst_lower = 0.0, worst_norm = 0.0;
    for (auto const& s : all) {
        if (!s.state) {
            ++missing;
            continue;
        }
        BoundState const& st = *s.state;
        RadialGrid const g = default_grid(st);
        double const norm2 = integrate_pieces(
            [&](double r) {
                auto const c = radial_components(st, r);
                return c.f * c.f + c.g * c.g;
            },
            {g.r_min, 1e-3, 1e-2, 0.1, 1.0, 3.0, 6.0, 10.0, 20.0, g.r_max}, 1e-12);
        worst_norm = std::max(worst_norm, std::abs(norm2 - 1.0));
        bad_norm += std::abs(norm2 - 1.0) > 1e-8;
        ++checked;
        if (st.params.symmetry != Symmetry::spin) {
            continue;
        }
        auto const nodes = g.nodes();
        double peak = 0.0;
        std::vector<double> f;
        for (double r : nodes) {
            auto const c = radial_components(st, r);
            peak = std::max(peak, std::abs(c.g));
            f.push_back(c.f);
        }
        double const h = 1e-3;
        double const mf = st.mass_factor();
        double const cpl = st.qn.kappa + st.params.tensor_h;
        auto F = [&](double r) { return radial_components(st, r).f; };
        double worst_here = 0.0;
        for (std::size_t i = 0; i < nodes.size(); i += 4) {
            double const r = nodes[i];
            if (r - 2 * h <= 0.0) {
                continue;
            }
            double const df = (F(r - 2 * h) - 8 * F(r - h) + 8 * F(r + h) - F(r + 2 * h)) / (12 * h);
            double const g_num = (df + cpl / r * F(r)) / mf;
            double const g_closed = radial_components(st, r).g;
            if (std::abs(g_closed) > 1e-10 * peak) {
                worst_here = std::max(worst_here, std::abs(g_num - g_closed) / std::abs(g_closed));
            }
        }
        worst_lower = std::max(worst_lower, worst_here);
        bad_lower += worst_here > 1e-6;
        int const n_nodes = count_nodes(f);
        if (n_nodes != st.qn.n) {
            ++bad_nodes;
            std::cerr << "  [7] nodes " << n_nodes << " != n " << st.qn.n << " for " << entry_name(s.entry) << "\n";
        }
    }
    verdict(7, missing == 0 && bad_lower == 0 && bad_norm == 0 && bad_nodes == 0,
            std::to_string(checked) + " states (" + std::to_string(missing) + " unsolved): max rel lower-component diff " +
                fmt(worst_lower) + ", max |norm-1| " + fmt(worst_norm) + ", node mismatches " +
                std::to_string(bad_nodes));
}

std::optional<double> splitting(ModelParams p, QuantumNumbers a, QuantumNumbers b)
{
    auto const sa = solve_level(a, p);
    auto const sb = solve_level(b, p);
    if (!sa || !sb) {
        return std::nullopt;
    }
    return std::abs(sa->energy - sb->energy);
}

// Returns a description; sets ok.
std::string monotone_sweep(ModelParams base, bool by_alpha, QuantumNumbers a, QuantumNumbers b, bool increasing,
                           bool zero_at_start, bool& ok)
{
    double const lo = by_alpha ? 0.1 : 0.0;
    double const hi = by_alpha ? 0.35 : 1.0;
    std::vector<std::optional<double>> v;
    for (int i = 0; i <= 10; ++i) {
        double const x = lo + (hi - lo) * i / 10.0;
        (by_alpha ? base.alpha : base.tensor_h) = x;
        v.push_back(splitting(base, a, b));
    }
    std::ostringstream s;
    bool good = true;
    for (std::size_t i = 0; i < v.size(); ++i) {
        s << (i ? " " : "") << (v[i] ? fmt(*v[i], 4) : "none");
        if (!v[i]) {
            good = false;
        } else if (i > 0 && v[i - 1]) {
            good = good && (increasing ? *v[i] > *v[i - 1] : *v[i] < *v[i - 1]);
        }
    }
    if (zero_at_start) {
        good = good && v[0] && *v[0] <= 1e-9;
    }
    ok = ok && good;
    return (good ? "ok [" : "violated [") + s.str() + "]";
}

void check_figures()
{
    bool ok = true;
    ModelParams ps = ModelParams::reference(Symmetry::pseudospin);
    auto const d52 = parse_label("1d5/2", Symmetry::pseudospin);
    auto const g72 = parse_label("0g7/2", Symmetry::pseudospin);
    std::cerr << "  [8] pspin 1d5/2-0g7/2 vs H: " << monotone_sweep(ps, false, d52, g72, true, true, ok) << "\n";
    std::cerr << "  [8] pspin 1d5/2-0g7/2 vs alpha (H=0.5): " << monotone_sweep(ps, true, d52, g72, false, false, ok)
              << "\n";
    ModelParams sp = ModelParams::reference(Symmetry::spin);
    for (auto [x, y] : {std::pair{"1p1/2", "1p3/2"}, std::pair{"1d3/2", "1d5/2"}, std::pair{"1f5/2", "1f7/2"}}) {
        auto const a = parse_label(x, Symmetry::spin);
        auto const b = parse_label(y, Symmetry::spin);
        std::cerr << "  [8] spin " << x << "-" << y << " vs H: " << monotone_sweep(sp, false, a, b, true, true, ok)
                  << "\n";
        ModelParams strong = sp;
        strong.tensor_h = 5.0;
        std::cerr << "  [8] spin " << x << "-" << y << " vs alpha (H=5): "
                  << monotone_sweep(strong, true, a, b, false, false, ok) << "\n";
    }
    verdict(8, ok, "doublet splitting monotonicity in H and alpha (8 sweeps of 11 points, see stderr)");
}

void check_pekeris()
{
    double const alpha = 0.25, re = 2.197224577;
    auto const k = pekeris_coefficients(alpha, re);
    double worst = 0.0;
    for (double r : matching_residuals(k)) {
        worst = std::max(worst, std::abs(r));
    }
    double const u = pekeris_variable(re, alpha);
    double const u_exact_point = pekeris_variable(std::log(3.0) / (2.0 * alpha), alpha);
    // r_e is ln 3 / (2 alpha) rounded to ten significant digits.
    double const rounding = 2.0 * alpha * 0.25 * 0.75 * 5e-10;
    bool const pass = worst <= 1e-12 && std::abs(u_exact_point - 0.25) <= 1e-15 && std::abs(u - 0.25) <= rounding;
    verdict(9, pass,
            "max matching residual " + fmt(worst) + ", u_e(ln3/2alpha) - 1/4 = " + fmt(u_exact_point - 0.25) +
                ", u_e(r_e) - 1/4 = " + fmt(u - 0.25) + " (r_e rounding bound " + fmt(rounding) + ")");
}

void check_exact_reports(std::vector<Solved> const& all)
{
    int found = 0, continuum = 0, not_found = 0, errors = 0;
    for (auto const& s : all) {
        try {
            QuantumNumbers const qn = formula_qn(s.entry, true);
            ModelParams const p = params_for(s.entry);
            ShootOptions opt;
            opt.scan_segments = 440;
            auto const r = shoot_eigenvalue(p, qn, OracleMode::exact, default_window(p), opt);
            std::cerr << "  [10] " << entry_name(s.entry) << ": analytic "
                      << (s.state ? fmt(s.state->energy, 10) : std::string("none")) << ", exact "
                      << (r.status == ShootStatus::found ? fmt(r.energy, 10) : to_string(r.status));
            if (r.status == ShootStatus::found && s.state) {
                std::cerr << ", deviation " << fmt(r.energy - s.state->energy);
            }
            std::cerr << "\n";
            found += r.status == ShootStatus::found;
            continuum += r.status == ShootStatus::continuum;
            not_found += r.status == ShootStatus::not_found;
        } catch (std::exception const& e) {
            ++errors;
            std::cerr << "  [10] " << entry_name(s.entry) << ": error " << e.what() << "\n";
        }
    }
    verdict(10, errors == 0,
            "exact-centrifugal reports for " + std::to_string(all.size()) + " entries: found " + std::to_string(found) +
                ", continuum " + std::to_string(continuum) + ", not found " + std::to_string(not_found));
}

} // namespace

int main()
{
    auto const spin = entries(Symmetry::spin, load_golden("spin_table.csv"));
    auto const pspin = entries(Symmetry::pseudospin, load_golden("pspin_table.csv"));

    check_table(1, "spin table (32 energies)", spin, {false});
    check_table(2, "pspin table (32 energies)", pspin, {false, true});
    check_degeneracy(spin, pspin);
    check_mapping();

    auto solved = solve_entries(spin);
    auto const ps = solve_entries(pspin);
    solved.insert(solved.end(), ps.begin(), ps.end());
    check_oracle(solved);
    check_nu(solved);
    check_wavefunctions(solved);
    check_figures();
    check_pekeris();
    check_exact_reports(solved);
    return failures == 0 ? 0 : 1;
}
