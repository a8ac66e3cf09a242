#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "conlat/cli.hpp"

namespace {

void add_common_options(CLI::App* cmd, conlat::cli::RunConfig& cfg,
                        std::string& format, std::string& sep) {
    cmd->add_option("--input", cfg.input_path, "input context file")->required();
    cmd->add_option("--format", format, "input format: objlist or cxt")
        ->check(CLI::IsMember({"objlist", "cxt"}));
    cmd->add_option("--sep", sep, "objlist separator, one character (default ',')");
    cmd->add_option("--workers", cfg.workers, "worker count (default: logical CPUs)");
}

int apply_common(conlat::cli::RunConfig& cfg, const std::string& format,
                 const std::string& sep) {
    cfg.format = (format == "cxt") ? conlat::cli::InputFormat::cxt
                                   : conlat::cli::InputFormat::objlist;
    if (sep.size() != 1 || !std::isprint(static_cast<unsigned char>(sep[0]))) {
        std::cerr << "error: --sep must be a single printable character\n";
        return 2;
    }
    cfg.separator = sep[0];
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"formal concept enumeration and concept-lattice construction"};
    app.require_subcommand(1);

    conlat::cli::RunConfig cfg;
    std::string format = "objlist";
    std::string sep = ",";
    std::string labels = "full";
    std::string bench_workers;

    CLI::App* concepts = app.add_subcommand("concepts", "enumerate all formal concepts");
    add_common_options(concepts, cfg, format, sep);
    concepts->add_option("--out", cfg.out_path, "write concepts as TSV");
    concepts->add_option("--stats", cfg.stats_path, "write run statistics as JSON");

    CLI::App* lattice = app.add_subcommand("lattice", "build and export the concept digraph");
    add_common_options(lattice, cfg, format, sep);
    lattice->add_option("--dot", cfg.dot_path, "write DOT here instead of stdout");
    lattice->add_option("--graphml", cfg.graphml_path, "also write GraphML");
    lattice->add_option("--out", cfg.out_path, "also write concepts as TSV");
    lattice->add_option("--stats", cfg.stats_path, "write run statistics as JSON");
    lattice->add_option("--labels", labels, "node labels: full or sizes")
        ->check(CLI::IsMember({"full", "sizes"}));

    CLI::App* validate = app.add_subcommand(
        "validate", "cross-check the engine against the brute-force oracles");
    add_common_options(validate, cfg, format, sep);

    CLI::App* bench = app.add_subcommand("bench", "repeat runs across worker counts");
    add_common_options(bench, cfg, format, sep);
    bench->add_option("--bench-workers", bench_workers,
                      "comma-separated worker counts (default 1,2,4,8)");
    bench->add_option("--repeat", cfg.repeat, "runs per worker count (default 5)");
    bench->add_option("--stats", cfg.stats_path,
                      "write the machine-readable table here instead of stdout");

    CLI11_PARSE(app, argc, argv);

    if (int rc = apply_common(cfg, format, sep); rc != 0) return rc;
    cfg.labels = (labels == "sizes") ? conlat::LabelMode::sizes : conlat::LabelMode::full;

    if (!bench_workers.empty()) {
        cfg.bench_workers.clear();
        std::size_t pos = 0;
        while (pos <= bench_workers.size()) {
            std::size_t comma = bench_workers.find(',', pos);
            std::string token = bench_workers.substr(
                pos, comma == std::string::npos ? std::string::npos : comma - pos);
            try {
                unsigned w = static_cast<unsigned>(std::stoul(token));
                if (w == 0) throw std::invalid_argument("zero");
                cfg.bench_workers.push_back(w);
            } catch (const std::exception&) {
                std::cerr << "error: bad --bench-workers entry: " << token << "\n";
                return 2;
            }
            if (comma == std::string::npos) break;
            pos = comma + 1;
        }
    }

    if (concepts->parsed()) return conlat::cli::cmd_concepts(cfg, std::cout, std::cerr);
    if (lattice->parsed()) return conlat::cli::cmd_lattice(cfg, std::cout, std::cerr);
    if (validate->parsed()) return conlat::cli::cmd_validate(cfg, std::cout, std::cerr);
    if (bench->parsed()) return conlat::cli::cmd_bench(cfg, std::cout, std::cerr);
    return 2;
}
