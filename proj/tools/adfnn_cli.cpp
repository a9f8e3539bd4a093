#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "adfnn/bench.hpp"

using namespace adfnn;
using namespace adfnn::bench;

namespace {

std::vector<int> parse_arch(const std::string& s) {
    std::vector<int> out;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        std::size_t used = 0;
        int w = 0;
        try {
            w = std::stoi(tok, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used == 0 || used != tok.size()) throw std::invalid_argument("bad --arch entry: '" + tok + "'");
        out.push_back(w);
    }
    return out;
}

int cmd_list() {
    for (const auto& p : registry()) {
        std::string methods;
        for (auto m : p.methods) methods += (methods.empty() ? "" : "|") + method_name(m);
        std::string adfs;
        for (auto a : p.adfs) adfs += (adfs.empty() ? "" : "|") + adf_name(a);
        std::printf("%-20s %dD  %-24s adf %-12s %s%s\n", p.name.c_str(), p.dim, methods.c_str(), adfs.c_str(),
                    p.summary.c_str(), p.exact ? "" : " [no exact solution]");
    }
    return 0;
}

void write_summary(const RunResult& r, const std::string& dir) {
    nlohmann::json j;
    j["problem"] = r.problem;
    j["method"] = method_name(r.config.method);
    j["adf"] = adf_name(r.config.adf);
    j["loss"] = loss_name(r.config.loss);
    j["epochs"] = r.config.epochs;
    j["seed"] = r.config.seed;
    j["precision"] = r.config.single_precision ? "f32" : "f64";
    for (const auto& [k, v] : r.metrics) j["metrics"][k] = format_number(v);
    std::ofstream out(dir + "/summary.json");
    if (!out) throw std::runtime_error("cannot write " + dir + "/summary.json");
    out << j.dump(2) << '\n';
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exact boundary conditions for neural PDE solvers via approximate distance fields"};
    app.require_subcommand(1);

    auto* list = app.add_subcommand("list", "print the problem registry");

    auto* solve = app.add_subcommand("solve", "train on a registered problem and write CSV output");
    std::string problem, method, adf, arch, activation, loss, precision, out_dir, sampling;
    std::optional<int> m, p, epochs, n_interior, n_boundary, trace_every, eval_grid;
    std::optional<double> lr, delta, loss_weight;
    std::optional<std::uint64_t> seed;
    solve->add_option("problem", problem, "problem name (see list)")->required();
    solve->add_option("--method", method, "collocation|ritz|eigen|eikonal");
    solve->add_option("--adf", adf, "req|mvp|exact|product");
    solve->add_option("--m", m, "R-equivalence order");
    solve->add_option("--p", p, "curve potential exponent");
    solve->add_option("--arch", arch, "hidden widths, e.g. \"50,50\"");
    solve->add_option("--activation", activation, "tanh|relu|repu3|gaussian");
    solve->add_option("--epochs", epochs);
    solve->add_option("--lr", lr);
    solve->add_option("--seed", seed);
    solve->add_option("--n-interior", n_interior);
    solve->add_option("--n-boundary", n_boundary);
    solve->add_option("--delta-margin", delta);
    solve->add_option("--sampling", sampling, "grid|uniform|halton");
    solve->add_option("--loss", loss, "standard|exactbc");
    solve->add_option("--loss-weight", loss_weight, "weight of the PDE term for --loss standard");
    solve->add_option("--precision", precision, "f32|f64");
    solve->add_option("--trace-every", trace_every, "error monitor interval in epochs");
    solve->add_option("--eval-grid", eval_grid, "evaluation grid points per axis");
    solve->add_option("--out", out_dir, "output directory");

    auto* adf_cmd = app.add_subcommand("adf", "dump ADF fields of a polygon file as CSV");
    std::string poly_file, adf_out;
    int grid = 101, adf_m = 1;
    adf_cmd->add_option("polygon", poly_file, "polygon file: one vertex per line, blank line between loops")->required();
    adf_cmd->add_option("--grid", grid, "points per axis");
    adf_cmd->add_option("--m", adf_m, "R-equivalence order");
    adf_cmd->add_option("--out", adf_out, "output file (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        if (list->parsed()) return cmd_list();

        if (solve->parsed()) {
            Overrides ov;
            if (!method.empty()) ov.method = parse_method(method);
            if (!adf.empty()) ov.adf = parse_adf(adf);
            ov.m = m;
            ov.p = p;
            if (!arch.empty()) ov.hidden = parse_arch(arch);
            if (!activation.empty()) ov.activation = parse_activation(activation);
            ov.epochs = epochs;
            ov.lr = lr;
            ov.seed = seed;
            ov.n_interior = n_interior;
            ov.n_boundary = n_boundary;
            ov.delta_margin = delta;
            if (!sampling.empty()) ov.sampling = parse_strategy(sampling);
            if (!loss.empty()) ov.loss = parse_loss(loss);
            ov.loss_weight = loss_weight;
            if (!precision.empty()) {
                if (precision != "f32" && precision != "f64") throw std::invalid_argument("unknown precision: " + precision);
                ov.single_precision = precision == "f32";
            }
            ov.trace_every = trace_every;
            ov.eval_per_axis = eval_grid;

            const auto& spec = find_problem(problem);
            const Config cfg = resolve(spec, ov);
            const RunResult r = run(spec, cfg);
            const std::string dir = out_dir.empty() ? "out/" + problem : out_dir;
            export_result(r, dir);
            write_summary(r, dir);
            std::printf("%s: loss %s", problem.c_str(), format_number(r.final_loss).c_str());
            for (const auto& [k, v] : r.metrics) {
                if (k != "final_loss") std::printf(", %s %s", k.c_str(), format_number(v).c_str());
            }
            std::printf(" -> %s\n", dir.c_str());
            return 0;
        }

        if (adf_cmd->parsed()) {
            if (grid < 2) throw std::invalid_argument("--grid must be >= 2");
            const Polygon poly = read_polygon(poly_file);
            const auto req = polygon_adf_req(poly, adf_m);
            const auto mvp = mvp_polygon_adf(poly);
            double x0 = 1e300, x1 = -1e300, y0 = 1e300, y1 = -1e300;
            for (const auto& loop : poly.loops()) {
                for (const auto& v : loop) {
                    x0 = std::min(x0, v[0]);
                    x1 = std::max(x1, v[0]);
                    y0 = std::min(y0, v[1]);
                    y1 = std::max(y1, v[1]);
                }
            }
            std::ostringstream os;
            os << "x,y,inside,req,mvp\n";
            for (int j = 0; j < grid; ++j) {
                for (int i = 0; i < grid; ++i) {
                    const double x = x0 + (x1 - x0) * i / (grid - 1), y = y0 + (y1 - y0) * j / (grid - 1);
                    os << format_number(x) << ',' << format_number(y) << ',' << (poly.contains({x, y}) ? 1 : 0) << ','
                       << format_number(req({x, y})) << ',' << format_number(mvp({x, y})) << '\n';
                }
            }
            if (adf_out.empty()) {
                std::cout << os.str();
            } else {
                std::ofstream out(adf_out);
                if (!out) throw std::runtime_error("cannot write " + adf_out);
                out << os.str();
            }
            return 0;
        }
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
