#include "tsketch/cli.hpp"

#include <CLI11.hpp>
#include <limits>
#include <fstream>
#include <iostream>

#include "tsketch/bench.hpp"
#include "tsketch/hosvd.hpp"
#include "tsketch/io.hpp"
#include "tsketch/json_io.hpp"
#include "tsketch/norms.hpp"

namespace tsketch {

namespace {

nlohmann::json load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open '" + path + "'");
    return nlohmann::json::parse(in);
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
    out << text;
}

std::string sidecar_default(const std::string& out) { return out + ".json"; }

int cmd_gen(const std::string& spec_path, const std::string& out,
            const std::string& sidecar) {
    const TuckerSpec spec = tucker_spec_from_json(load_json(spec_path));
    const PlantedTensor planted = gen_tucker(spec);
    io::write_dense(out, planted.tensor);

    std::vector<std::string> basis_paths;
    for (std::size_t j = 0; j < planted.factors.size(); ++j) {
        const std::string path = out + ".mode" + std::to_string(j + 1) + ".dten";
        io::write_matrix_dense(path, planted.factors[j].columns());
        basis_paths.push_back(path);
    }
    nlohmann::json side{{"spec", to_json(spec)}, {"tensor", out},
                        {"planted_bases", basis_paths}};
    write_text(sidecar.empty() ? sidecar_default(out) : sidecar, side.dump(2) + "\n");
    return 0;
}

int cmd_sketch(const std::string& in, std::uint64_t budget, std::uint64_t seed,
               const std::string& out, bool baseline, const std::string& report_path) {
    const DenseTensor a = io::read_dense(in);
    auto [sketch, report] =
        baseline ? sparsify_baseline_zero_small(a, budget, seed) : sparsify(a, budget, seed);
    io::write_sparse(out, sketch);
    if (!report_path.empty()) write_text(report_path, to_json(report).dump(2) + "\n");
    return 0;
}

int cmd_norm(const std::string& in, std::uint64_t restarts, std::uint64_t iters, double tol) {
    NormEstimate est;
    if (io::detect_format(in) == io::TensorFormat::Dense)
        est = tensor_spectral_norm(io::read_dense(in), restarts, iters, tol);
    else
        est = tensor_spectral_norm(io::read_sparse(in), restarts, iters, tol);
    std::cout << to_json(est).dump(2) << "\n";
    return 0;
}

int cmd_hosvd(const std::string& in, std::uint64_t mode, std::uint64_t rank,
              const std::string& method, std::uint64_t budget, std::uint64_t seed,
              const std::string& out, const std::string& diag_path) {
    const DenseTensor a = io::read_dense(in);
    HosvdResult result = [&] {
        if (method == "exact") return hosvd_exact(a, mode, rank);
        if (method == "direct") return hosvd_direct(a, budget, mode, rank, seed);
        return hosvd_product(a, budget, mode, rank, seed);
    }();
    io::write_matrix_dense(out, result.basis.columns());
    if (!diag_path.empty())
        write_text(diag_path, to_json(result.diagnostics).dump(2) + "\n");
    return 0;
}

int cmd_bench(const std::string& plan_path, std::string out) {
    const SweepPlan plan = sweep_plan_from_json(load_json(plan_path));
    if (out.empty()) out = plan.output;
    if (out.empty())
        throw std::invalid_argument("bench: no output path (--out or plan \"output\")");
    const DenseTensor input = load_plan_input(plan);
    const std::vector<SweepRecord> records = run_budget_sweep(plan, input);
    write_text(out, sweep_csv(plan, records));
    return 0;
}

}  // namespace

int run_cli(int argc, const char* const* argv) {
    CLI::App app{"randomized tensor sparsification and sketch-based HOSVD"};
    app.require_subcommand(1);

    std::string gen_spec, gen_out, gen_sidecar;
    const CLI::Range positive_u64(std::uint64_t{1},
                                  std::numeric_limits<std::uint64_t>::max());

    CLI::App* gen = app.add_subcommand("gen", "generate a planted tensor");
    gen->add_option("--spec", gen_spec, "TuckerSpec JSON file")->required();
    gen->add_option("--out", gen_out, "output DTEN path")->required();
    gen->add_option("--sidecar", gen_sidecar, "sidecar JSON path (default <out>.json)");

    std::string sk_in, sk_out, sk_report;
    std::uint64_t sk_budget = 0, sk_seed = 0;
    bool sk_baseline = false;
    CLI::App* sk = app.add_subcommand("sketch", "sparsify a dense tensor");
    sk->add_option("--in", sk_in, "input DTEN")->required();
    sk->add_option("--budget", sk_budget, "sampling budget n >= 1")
        ->required()
        ->check(positive_u64);
    sk->add_option("--seed", sk_seed, "64-bit seed");
    sk->add_option("--out", sk_out, "output STEN")->required();
    sk->add_flag("--baseline-zero-small", sk_baseline, "drop small entries instead");
    sk->add_option("--report", sk_report, "SketchReport JSON path");

    std::string norm_in;
    std::uint64_t norm_restarts = 10, norm_iters = 200;
    double norm_tol = 1e-9;
    CLI::App* norm = app.add_subcommand("norm", "spectral norm lower bound");
    norm->add_option("--in", norm_in, "input DTEN or STEN")->required();
    norm->add_option("--restarts", norm_restarts)->check(positive_u64);
    norm->add_option("--iters", norm_iters)->check(positive_u64);
    norm->add_option("--tol", norm_tol)->check(CLI::PositiveNumber);

    std::string ho_in, ho_method = "exact", ho_out, ho_diag;
    std::uint64_t ho_mode = 0, ho_rank = 0, ho_budget = 0, ho_seed = 0;
    CLI::App* ho = app.add_subcommand("hosvd", "mode-j singular subspace estimate");
    ho->add_option("--in", ho_in, "input DTEN")->required();
    ho->add_option("--mode", ho_mode)->required()->check(positive_u64);
    ho->add_option("--rank", ho_rank)->required()->check(positive_u64);
    ho->add_option("--method", ho_method)
        ->check(CLI::IsMember({"exact", "direct", "product"}));
    ho->add_option("--budget", ho_budget)->check(positive_u64);
    ho->add_option("--seed", ho_seed);
    ho->add_option("--out", ho_out, "basis DTEN path")->required();
    ho->add_option("--diagnostics", ho_diag, "diagnostics JSON path");

    std::string bench_plan, bench_out;
    CLI::App* bench = app.add_subcommand("bench", "run a budget sweep plan");
    bench->add_option("--plan", bench_plan, "SweepPlan JSON")->required();
    bench->add_option("--out", bench_out, "output CSV path");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (gen->parsed()) return cmd_gen(gen_spec, gen_out, gen_sidecar);
        if (sk->parsed())
            return cmd_sketch(sk_in, sk_budget, sk_seed, sk_out, sk_baseline, sk_report);
        if (norm->parsed()) return cmd_norm(norm_in, norm_restarts, norm_iters, norm_tol);
        if (ho->parsed()) {
            if (ho_method != "exact" && ho_budget == 0) {
                std::cerr << "hosvd: --budget is required with --method " << ho_method << "\n";
                return 2;
            }
            return cmd_hosvd(ho_in, ho_mode, ho_rank, ho_method, ho_budget, ho_seed, ho_out,
                             ho_diag);
        }
        if (bench->parsed()) return cmd_bench(bench_plan, bench_out);
        return 2;
    } catch (const NumericalError& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return 4;
    } catch (const FormatError& e) {
        std::cerr << "format error: " << e.what() << "\n";
        return 3;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return 3;
    } catch (const std::invalid_argument& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return 3;
    } catch (const std::out_of_range& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    }
}

}  // namespace tsketch
