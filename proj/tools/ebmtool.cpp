// Command-line front end: forward cluster generation, kernel tables, spectral
// inversion, and the property-suite runner. All numerics live in the library;
// this file is argument handling and file I/O.
//
// Exit codes: 0 ok, 1 property failure, 2 input error, 3 fit failure,
// 64 usage.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <mutex>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ebm/ball_modes.hpp"
#include "ebm/errors.hpp"
#include "ebm/inversion.hpp"
#include "ebm/io.hpp"
#include "ebm/model.hpp"
#include "ebm/parallel.hpp"
#include "ebm/relaxation.hpp"
#include "ebm/spectrum.hpp"
#include "ebm/verify.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitPropertyFailure = 1;
constexpr int kExitInputError = 2;
constexpr int kExitFitFailure = 3;
constexpr int kExitUsage = 64;

void print_error_json(ebm::errc code, const std::string& message) {
    nlohmann::json j;
    j["error"] = {{"code", ebm::errc_name(code)}, {"message", message}};
    std::cerr << j.dump() << "\n";
}

int classify_error(const ebm::Error& e) {
    switch (e.code()) {
        case ebm::errc::inconsistent_clusters:
        case ebm::errc::complex_beta:
        case ebm::errc::non_positive_alpha:
        case ebm::errc::negative_modulus:
        case ebm::errc::ratio_inconsistent:
        case ebm::errc::ill_conditioned:
        case ebm::errc::no_convergence:
            return kExitFitFailure;
        default:
            return kExitInputError;
    }
}

std::vector<double> parse_t_grid(const std::string& spec) {
    double start = 0.0, stop = 0.0, step = 0.0;
    if (std::sscanf(spec.c_str(), "%lf:%lf:%lf", &start, &stop, &step) != 3)
        ebm::fail(ebm::errc::bad_input, "t-grid must be start:stop:step");
    if (!(step > 0.0) || stop < start)
        ebm::fail(ebm::errc::bad_input, "t-grid needs step > 0 and stop >= start");
    std::vector<double> grid;
    for (int k = 0;; ++k) {
        double t = start + k * step;
        if (t > stop + 1e-9 * step) break;
        grid.push_back(t);
    }
    return grid;
}

ebm::EBMModel load_model(const std::string& path) {
    ebm::EBMModel m = ebm::model_from_json(ebm::read_file(path));
    ebm::require_valid(m);
    return m;
}

std::filesystem::path out_path(const std::string& dir, const std::string& name) {
    std::filesystem::path p(dir);
    std::filesystem::create_directories(p);
    return p / name;
}

struct ForwardArgs {
    std::string model_path;
    std::vector<int> ells;
    std::string t_grid;
    std::string out_dir = ".";
};

int run_forward(const ForwardArgs& args, bool kernel_only) {
    ebm::EBMModel model = load_model(args.model_path);
    ebm::RelaxationSpectrum spectrum = ebm::compute_spectrum(model);

    if (!args.t_grid.empty()) {
        auto grid = parse_t_grid(args.t_grid);
        ebm::write_file(out_path(args.out_dir, "kernel.csv").string(),
                        ebm::kernel_csv(spectrum, grid));
    }
    if (kernel_only) return kExitOk;

    ebm::PronyPair prony = ebm::build_prony(model, spectrum);
    double lambda0 = model.elements[0].lambda;
    double mu0 = model.elements[0].mu;

    std::vector<ebm::RadialMode> modes(args.ells.size());
    std::vector<std::string> cluster_json(args.ells.size());
    std::exception_ptr failure = nullptr;
    std::mutex failure_mutex;
    ebm::parallel_for(static_cast<int>(args.ells.size()), [&](int i) {
        try {
            int ell = args.ells[static_cast<size_t>(i)];
            ebm::RadialMode mode = ebm::solve_mode(lambda0, mu0, model.R, ell);
            ebm::ClusterSpectrum cs = ebm::cluster_roots(prony, mode);
            modes[static_cast<size_t>(i)] = mode;
            cluster_json[static_cast<size_t>(i)] = ebm::cluster_to_json(cs);
        } catch (...) {
            std::lock_guard<std::mutex> lock(failure_mutex);
            if (!failure) failure = std::current_exception();
        }
    });
    if (failure) std::rethrow_exception(failure);

    for (size_t i = 0; i < args.ells.size(); ++i) {
        std::string name = "cluster_ell" + std::to_string(args.ells[i]) + ".json";
        ebm::write_file(out_path(args.out_dir, name).string(), cluster_json[i]);
    }
    ebm::write_file(out_path(args.out_dir, "modes.csv").string(), ebm::modes_csv(modes));
    return kExitOk;
}

struct InvertArgs {
    std::vector<std::string> cluster_paths;
    std::string mode = "known-c";
    double radius = 1.0;
    double tol = 1e-6;
    std::string out_dir = ".";
};

int run_invert(const InvertArgs& args) {
    ebm::ClusterSpectrum cs1 = ebm::cluster_from_json(ebm::read_file(args.cluster_paths[0]));
    ebm::ClusterSpectrum cs2 = ebm::cluster_from_json(ebm::read_file(args.cluster_paths[1]));
    ebm::ClusterData d1 = ebm::cluster_data_from(cs1);
    ebm::ClusterData d2 = ebm::cluster_data_from(cs2);

    ebm::InversionResult result;
    if (args.mode == "known-c") {
        ebm::RecoveredProny rec = ebm::recover_prony(d1, d2);
        result = ebm::recover_moduli(rec.D, rec.alpha, rec.beta, d1.n());
        result.diagnostics.mode = "known-c";
        result.diagnostics.low_coeff_rel = rec.low_coeff_rel;
        result.diagnostics.c1 = d1.c;
        result.diagnostics.c2 = d2.c;
        std::vector<ebm::ClusterData> clusters{d1, d2};
        result.fit_residual = ebm::fit_residual(result, clusters).value;
    } else {
        result = ebm::self_consistent_invert(d1.roots, d2.roots, d1.ell, d2.ell, args.radius);
    }

    ebm::write_file(out_path(args.out_dir, "inversion.json").string(),
                    ebm::inversion_to_json(result));
    std::cout << "mu0 = " << ebm::format_number(result.mu0)
              << "  lambda0 = " << ebm::format_number(result.lambda0)
              << "  D = " << ebm::format_number(result.D)
              << "  fit_residual = " << ebm::format_number(result.fit_residual) << "\n";
    return result.fit_residual < args.tol ? kExitOk : kExitFitFailure;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Prony relaxation kernels and free-oscillation eigenvalue clusters "
                 "of the extended Burgers ball"};
    app.require_subcommand(1);

    ForwardArgs fwd;
    auto* forward = app.add_subcommand("forward", "solve modes and write cluster files");
    forward->add_option("--model", fwd.model_path, "model JSON path")->required();
    forward->add_option("--ell", fwd.ells, "mode indices (comma separated)")
        ->required()
        ->delimiter(',');
    forward->add_option("--t-grid", fwd.t_grid, "kernel grid start:stop:step");
    forward->add_option("--out", fwd.out_dir, "output directory");

    ForwardArgs ker;
    auto* kernel = app.add_subcommand("kernel", "write the relaxation kernel table");
    kernel->add_option("--model", ker.model_path, "model JSON path")->required();
    kernel->add_option("--t-grid", ker.t_grid, "kernel grid start:stop:step")->required();
    kernel->add_option("--out", ker.out_dir, "output directory");

    InvertArgs inv;
    auto* invert = app.add_subcommand("invert", "recover the model from two cluster files");
    invert->add_option("--clusters", inv.cluster_paths, "two cluster JSON paths")
        ->required()
        ->expected(2);
    invert->add_option("--mode", inv.mode, "known-c or self-consistent")
        ->check(CLI::IsMember({"known-c", "self-consistent"}));
    invert->add_option("--radius", inv.radius, "ball radius (self-consistent mode)");
    invert->add_option("--tol", inv.tol, "fit residual threshold for exit code 0");
    invert->add_option("--out", inv.out_dir, "output directory");

    ebm::VerifyOptions vopt;
    auto* verify = app.add_subcommand("verify", "run the seeded property suites");
    verify->add_option("--seed", vopt.seed, "RNG seed");
    verify->add_option("--cases", vopt.cases, "cases per suite (0 = defaults)");
    verify->add_option("--only", vopt.only, "substring filter on suite names");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return e.get_exit_code() == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (forward->parsed()) {
            for (int ell : fwd.ells)
                if (ell < 1) {
                    print_error_json(ebm::errc::bad_input, "--ell entries must be >= 1");
                    return kExitUsage;
                }
            return run_forward(fwd, false);
        }
        if (kernel->parsed()) return run_forward(ker, true);
        if (invert->parsed()) return run_invert(inv);
        if (verify->parsed()) {
            auto results = ebm::run_verify(vopt);
            std::cout << ebm::verify_report(results);
            for (const auto& r : results)
                if (!r.pass) return kExitPropertyFailure;
            return kExitOk;
        }
    } catch (const ebm::Error& e) {
        print_error_json(e.code(), e.what());
        return classify_error(e);
    } catch (const std::exception& e) {
        print_error_json(ebm::errc::bad_input, e.what());
        return kExitInputError;
    }
    return kExitUsage;
}
