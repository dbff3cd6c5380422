#include <cmath>
#include <fstream>
#include <iostream>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "ymflow/diagnostics.hpp"
#include "ymflow/field.hpp"
#include "ymflow/flow.hpp"
#include "ymflow/functionals.hpp"
#include "ymflow/io.hpp"
#include "ymflow/lattice.hpp"
#include "ymflow/spectral.hpp"

using namespace ymflow;

namespace {

// Geometry storage for fields built in this process.
const LatticeGeometry* own_geometry(const RunConfig& cfg) {
    static std::vector<std::unique_ptr<LatticeGeometry>> pool;
    pool.push_back(std::make_unique<LatticeGeometry>(cfg.make_geometry()));
    return pool.back().get();
}

LinkField initial_field(const RunConfig& cfg, const LatticeGeometry*& geo) {
    if (cfg.initial == "file") {
        if (cfg.initial_file.empty())
            throw std::runtime_error("run.initial = file requires run.initial_file");
        return read_snapshot_file(cfg.initial_file, geo);
    }
    geo = own_geometry(cfg);
    FlatConnectionSpec spec = standard_flat_spec(cfg.twist);
    LinkField U = flat_links(spec, *geo);
    if (cfg.initial == "random") {
        U = random_near(U, cfg.noise, cfg.seed);
    } else if (cfg.initial == "instanton") {
        std::array<double, 4> center{};
        for (int d = 0; d < 4; ++d) center[d] = cfg.dims[d] / 2.0 - 0.5;
        U = merge_fields(U, seed_instanton(*geo, center, cfg.rho, cfg.instanton_sign));
        if (cfg.noise > 0.0) U = random_near(U, cfg.noise, cfg.seed);
    } else if (cfg.initial != "flat") {
        throw std::runtime_error("unknown run.initial value: " + cfg.initial);
    }
    return U;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"gradient flow toolbox for twisted SU(2) cylinder lattices"};
    app.require_subcommand(1);

    std::string config_path, out_path = "out";
    std::uint64_t seed_override = 0;
    bool seed_set = false;
    int threads = 1;
    app.add_option("--config", config_path, "run configuration file")->required();
    app.add_option("--out", out_path, "output path prefix");
    app.add_option("--seed", seed_override, "override run.seed")
        ->each([&](const std::string&) { seed_set = true; });
    // accepted for interface stability; execution is single-threaded so that
    // results are bitwise reproducible
    app.add_option("--threads", threads, "ignored (runs are deterministic)");

    auto* cmd_init = app.add_subcommand("init", "build the initial field and save a snapshot");
    auto* cmd_flow = app.add_subcommand("flow", "run the perturbed gradient flow");
    auto* cmd_charge = app.add_subcommand("charge", "report topological charge of the field");
    auto* cmd_cs = app.add_subcommand("cs", "relative Chern-Simons of a winding interpolation");
    int winding = 1;
    double smooth_tau = 0.0;
    cmd_cs->add_option("--winding", winding, "winding degree of the gauge interpolation");
    cmd_cs->add_option("--smooth", smooth_tau,
                       "gradient-flow time used to smooth the interpolation first");
    auto* cmd_spectrum =
        app.add_subcommand("spectrum", "extended-Hessian spectrum on the flat slice");
    int n_eigs = 12;
    bool winding_loops = false;
    cmd_spectrum->add_option("--count", n_eigs, "number of eigenvalues to report");
    cmd_spectrum->add_flag("--winding-loops", winding_loops,
                           "include winding loops in the slice perturbation");
    auto* cmd_detect = app.add_subcommand("detect", "energy concentration scan");
    double radius = 3.0;
    cmd_detect->add_option("--radius", radius, "detection ball radius");
    auto* cmd_axioms = app.add_subcommand("axioms", "perturbation structure audit");
    auto* cmd_gradcheck =
        app.add_subcommand("gradcheck", "finite-difference test of the flow force");

    CLI11_PARSE(app, argc, argv);

    try {
        RunConfig cfg = parse_config_file(config_path);
        if (seed_set) cfg.seed = seed_override;
        const LatticeGeometry* geo = nullptr;

        if (cmd_init->parsed()) {
            LinkField U = initial_field(cfg, geo);
            write_snapshot_file(out_path + ".ymfl", U);
            std::cout << "wrote " << out_path << ".ymfl\n";
            return 0;
        }

        LinkField U = initial_field(cfg, geo);
        HolonomyPerturbation pert(*geo, cfg.make_perturbation());

        if (cmd_flow->parsed()) {
            FlowTrace trace = run_flow(U, pert, cfg.schedule);
            write_flow_csv_file(out_path + ".csv", trace.samples);
            write_snapshot_file(out_path + ".ymfl", trace.final_field);
            std::ofstream js(out_path + ".json");
            js << summary_json(cfg, trace) << "\n";
            std::cout << "accepted " << trace.steps_accepted << " steps, rejected "
                      << trace.steps_rejected << ", final tau " << trace.final_tau << "\n";
            std::cout << "wrote " << out_path << ".csv, .json, .ymfl\n";
        } else if (cmd_charge->parsed()) {
            CurvatureField F = clover_field(U);
            CurvatureField Fi = clover_field_improved(U);
            std::cout.precision(12);
            std::cout << "Q = " << topological_charge(F) << "\n";
            std::cout << "kappa = " << kappa_charge(F) << "\n";
            std::cout << "Q_improved = " << topological_charge(Fi) << "\n";
            std::cout << "kappa_improved = " << kappa_charge(Fi) << "\n";
        } else if (cmd_cs->parsed()) {
            FlatConnectionSpec spec = standard_flat_spec(cfg.twist);
            GaugeTransformField g = winding_gauge_transform(*geo, winding);
            LinkField interp = gauge_interpolation_field(spec, g, *geo);
            if (smooth_tau > 0.0) {
                FlowSchedule sm;
                sm.tau_max = smooth_tau;
                sm.sample_every = 1000000;
                FlowTrace tr = run_flow(interp, pert, sm);
                interp = tr.final_field;
            }
            std::cout.precision(12);
            std::cout << "relative_cs = " << relative_chern_simons(interp, pert) << "\n";
        } else if (cmd_spectrum->parsed()) {
            SliceGeometry sgeo({cfg.dims[1], cfg.dims[2], cfg.dims[3]}, cfg.twist);
            SliceLinks links(sgeo, standard_flat_spec(cfg.twist));
            SlicePerturbationSpec sp;
            sp.beta = cfg.beta;
            sp.w0 = cfg.w0;
            sp.winding_loops = winding_loops;
            SpectrumReport rep = smallest_eigenvalues(links, sp, n_eigs, 1e-8);
            std::cout.precision(12);
            std::cout << "gap = " << rep.gap << "\n";
            std::cout << "zero_modes = " << rep.n_zero_modes << "\n";
            std::cout << "acyclic = " << (rep.acyclic ? "yes" : "no") << "\n";
            for (double ev : rep.eigenvalues) std::cout << "lambda " << ev << "\n";
        } else if (cmd_detect->parsed()) {
            auto peaks = concentration_scan(U, pert, radius);
            for (const auto& p : peaks) {
                auto c = geo->site_coords(p.site);
                std::cout << "peak at (" << c[0] << "," << c[1] << "," << c[2] << "," << c[3]
                          << ") mass " << p.mass << "\n";
            }
        } else if (cmd_axioms->parsed()) {
            AxiomAudit a = axiom_audit(U, pert, cfg.seed);
            std::cout.precision(12);
            std::cout << "k_sup = " << a.k_sup << " (bound " << a.k_bound << ")\n";
            std::cout << "k_wedge_k = " << a.k_wedge_k << "\n";
            std::cout << "pairing_closedness = " << a.axiom2_ii << "\n";
            std::cout << "bianchi_compatibility = " << a.axiom2_iv << "\n";
            std::cout << "hessian_symmetry = " << a.hessian_symmetry << "\n";
            std::cout << "bianchi_perturbed = " << a.bianchi_perturbed << "\n";
            std::cout << "bianchi_plain = " << a.bianchi_plain << "\n";
        } else if (cmd_gradcheck->parsed()) {
            LinkAlgebraField g = force(U, pert);
            std::mt19937_64 rng(cfg.seed);
            std::normal_distribution<double> gauss(0.0, 1.0);
            LinkAlgebraField v(*geo);
            for (int l = 0; l < geo->n_links(); ++l)
                if (!geo->link_frozen(l))
                    v.v[static_cast<size_t>(l)] = Alg{gauss(rng), gauss(rng), gauss(rng)};
            const double h = 1e-5;
            auto shifted = [&](double eps) {
                LinkField Us = U;
                for (int l = 0; l < geo->n_links(); ++l)
                    Us.u[static_cast<size_t>(l)] =
                        exp_alg(eps * v.v[static_cast<size_t>(l)]) * Us.u[static_cast<size_t>(l)];
                return total_action(Us, pert);
            };
            double fd = (shifted(h) - shifted(-h)) / (2.0 * h);
            double exact = inner_int(g, v);
            std::cout.precision(12);
            std::cout << "directional_fd = " << fd << "\n";
            std::cout << "directional_exact = " << exact << "\n";
            std::cout << "abs_error = " << std::abs(fd - exact) << "\n";
        }
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
