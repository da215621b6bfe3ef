// holo: command-line front end for the loop-model / SAW verification library.
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "holo/errors.hpp"
#include "holo/loopdomain.hpp"
#include "holo/params.hpp"
#include "holo/sawlattice.hpp"
#include "holo/weights.hpp"

namespace {

constexpr double kPi = std::numbers::pi;

std::string fmt(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string fmt_pair(holo::Complex z) {
    return "[" + fmt(z.real()) + ", " + fmt(z.imag()) + "]";
}

holo::LatticeKind parse_lattice(const std::string& s) {
    if (s == "honeycomb") return holo::LatticeKind::Honeycomb;
    if (s == "3-12") return holo::LatticeKind::ThreeTwelve;
    if (s == "martini") return holo::LatticeKind::Martini;
    throw CLI::ValidationError("--lattice", "unknown lattice '" + s + "'");
}

int env_workers() {
    const char* v = std::getenv("HOLO_WORKERS");
    if (!v) return 1;
    const int w = std::atoi(v);
    return w >= 1 ? w : 1;
}

// --config FILE: JSON object whose keys are long option names.  Explicit flags
// win; config values are appended as trailing options only when absent.
std::vector<std::string> apply_config(std::vector<std::string> args) {
    std::string path;
    for (size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--config") {
            if (i + 1 >= args.size()) throw CLI::ValidationError("--config", "missing file");
            path = args[i + 1];
            args.erase(args.begin() + static_cast<long>(i), args.begin() + static_cast<long>(i) + 2);
            break;
        }
    }
    if (path.empty()) return args;
    std::ifstream in(path);
    if (!in) throw CLI::ValidationError("--config", "cannot open " + path);
    nlohmann::json cfg;
    in >> cfg;
    if (!cfg.is_object()) throw CLI::ValidationError("--config", "top level must be an object");
    for (const auto& [key, val] : cfg.items()) {
        const std::string flag = "--" + key;
        bool present = false;
        for (const auto& a : args)
            if (a == flag || a.rfind(flag + "=", 0) == 0) present = true;
        if (present) continue;
        args.push_back(flag);
        if (val.is_array()) {
            for (const auto& v : val) args.push_back(v.is_string() ? v.get<std::string>() : v.dump());
        } else if (!val.is_boolean() || !val.get<bool>()) {
            args.push_back(val.is_string() ? val.get<std::string>() : val.dump());
        }
    }
    return args;
}

struct LambdaOpt {
    std::optional<double> lambda;
    std::vector<int> frac; // p q -> lambda = p pi / q

    void attach(CLI::App* cmd, bool required = true) {
        auto* l = cmd->add_option("--lambda", lambda, "crossing parameter (radians)");
        auto* f = cmd->add_option("--lambda-frac", frac, "lambda = p*pi/q")->expected(2);
        l->excludes(f);
        if (required) {
            // one of the two must be given; checked in value()
        }
    }
    double value() const {
        if (frac.size() == 2) {
            if (frac[1] == 0) throw CLI::ValidationError("--lambda-frac", "q must be nonzero");
            return static_cast<double>(frac[0]) * kPi / static_cast<double>(frac[1]);
        }
        if (!lambda) throw CLI::ValidationError("--lambda", "give --lambda or --lambda-frac");
        return *lambda;
    }
};

void emit_weights(const holo::LoopWeights& w, double lambda, double u,
                  const std::string& format) {
    if (format == "csv") {
        std::string out = "i,rho_i\n";
        for (int i = 0; i < 9; ++i) out += std::to_string(i + 1) + "," + fmt(w[i]) + "\n";
        std::cout << out;
        return;
    }
    std::string out = "{\n  \"lambda\": " + fmt(lambda) + ",\n  \"u\": " + fmt(u) +
                      ",\n  \"rho\": [";
    for (int i = 0; i < 9; ++i) out += std::string(i ? ", " : "") + fmt(w[i]);
    out += "]\n}\n";
    std::cout << out;
}

int run(std::vector<std::string> args) {
    CLI::App app{"discrete holomorphicity / critical loop-model weight verifier"};
    app.require_subcommand(1);

    std::string format = "json";
    uint64_t budget = holo::kDefaultStepBudget;
    int workers = env_workers();

    // ---- weights ----
    auto* c_weights = app.add_subcommand("weights", "critical Boltzmann weights rho_1..rho_9");
    LambdaOpt w_lambda;
    w_lambda.attach(c_weights);
    double w_u = 0.0;
    int w_eps1 = 1, w_eps2 = 1;
    c_weights->add_option("--u", w_u, "spectral parameter")->required();
    c_weights->add_option("--eps1", w_eps1, "sign of rho2, rho3 (+1/-1)");
    c_weights->add_option("--eps2", w_eps2, "sign of rho4, rho5 (+1/-1)");
    c_weights->add_option("--format", format, "json or csv");

    // ---- residuals ----
    auto* c_res = app.add_subcommand("residuals", "the four holomorphicity relations");
    LambdaOpt r_lambda;
    r_lambda.attach(c_res);
    double r_theta = kPi / 2;
    std::optional<double> r_u;
    c_res->add_option("--theta", r_theta, "rhombic embedding angle (radians)")->required();
    c_res->add_option("--u", r_u, "override the matched spectral parameter");
    c_res->add_option("--format", format, "json or csv");

    // ---- solve ----
    auto* c_solve = app.add_subcommand("solve", "weights from the linear system's nullspace");
    double s_n = 0.0, s_theta = kPi / 2, s_sigma = 0.0;
    c_solve->add_option("--n", s_n, "loop fugacity")->required();
    c_solve->add_option("--theta", s_theta, "embedding angle")->required();
    c_solve->add_option("--sigma", s_sigma, "spin")->required();
    c_solve->add_option("--format", format, "json or csv");

    // ---- verify-loop ----
    auto* c_vloop = app.add_subcommand("verify-loop", "contour residuals of the loop observable");
    LambdaOpt v_lambda;
    v_lambda.attach(c_vloop);
    int v_w = 3, v_h = 3;
    double v_theta = kPi / 2;
    std::optional<double> v_u;
    c_vloop->add_option("--width", v_w, "domain width")->required();
    c_vloop->add_option("--height", v_h, "domain height")->required();
    c_vloop->add_option("--theta", v_theta, "embedding angle")->required();
    c_vloop->add_option("--u", v_u, "override the matched spectral parameter");
    c_vloop->add_option("--format", format, "json or csv");

    // ---- saw ----
    auto* c_saw = app.add_subcommand("saw", "self-avoiding walk operations");
    c_saw->require_subcommand(1);

    auto* c_count = c_saw->add_subcommand("count", "exact walk counts c_1..c_N");
    std::string lattice = "honeycomb";
    int max_len = 15;
    c_count->add_option("--lattice", lattice, "honeycomb, 3-12 or martini");
    c_count->add_option("--max-len", max_len, "series length")->required();
    c_count->add_option("--budget", budget, "visited-node budget");
    c_count->add_option("--workers", workers, "enumeration threads");
    c_count->add_option("--format", format, "json or csv");

    auto* c_mu = c_saw->add_subcommand("mu", "connective constant estimate from the series");
    std::string estimator = "extrapolate";
    c_mu->add_option("--lattice", lattice, "honeycomb, 3-12 or martini");
    c_mu->add_option("--max-len", max_len, "series length")->required();
    c_mu->add_option("--estimator", estimator, "raw or extrapolate");
    c_mu->add_option("--budget", budget, "visited-node budget");
    c_mu->add_option("--workers", workers, "enumeration threads");
    c_mu->add_option("--format", format, "json or csv");

    auto* c_vobs = c_saw->add_subcommand("verify-obs", "contour residuals of the SAW observable");
    int o_nx = 6, o_ny = 4;
    std::optional<double> o_x;
    double o_sigma = 5.0 / 8;
    c_vobs->add_option("--nx", o_nx, "patch columns");
    c_vobs->add_option("--ny", o_ny, "patch rows");
    c_vobs->add_option("--x", o_x, "step fugacity (default: the critical 1/sqrt(2+sqrt2))");
    c_vobs->add_option("--sigma", o_sigma, "spin");
    c_vobs->add_option("--format", format, "json or csv");

    auto* c_surf = c_saw->add_subcommand("surface", "half-plane series resolved by contacts");
    std::string orientation = "a";
    c_surf->add_option("--orientation", orientation, "a or b");
    c_surf->add_option("--max-len", max_len, "series length")->required();
    c_surf->add_option("--budget", budget, "visited-node budget");
    c_surf->add_option("--format", format, "json or csv");

    // ---- constants ----
    auto* c_const = app.add_subcommand("constants", "the exact lattice constants");
    c_const->add_option("--format", format, "json or csv");

    // ---- seed-recipes ----
    auto* c_seed = app.add_subcommand("seed-recipes",
                                      "invocations reproducing each verification");

    app.parse(args); // CLI::ParseError handled by the caller

    if (format != "json" && format != "csv")
        throw CLI::ValidationError("--format", "must be json or csv");

    if (c_weights->parsed()) {
        const double lambda = w_lambda.value();
        emit_weights(holo::compute_weights(lambda, w_u, w_eps1, w_eps2), lambda, w_u, format);
        return 0;
    }

    if (c_res->parsed()) {
        const double lambda = r_lambda.value();
        const double sigma = holo::spin(lambda);
        const double n = holo::fugacity_from_lambda(lambda);
        const double u = r_u ? *r_u : holo::spectral_from_angle(sigma, r_theta);
        const auto res = holo::holo_residuals(holo::compute_weights(lambda, u), n, r_theta, sigma);
        if (format == "csv") {
            std::string out = "k,re,im\n";
            for (int i = 0; i < 4; ++i)
                out += std::to_string(i + 1) + "," + fmt(res.r[i].real()) + "," +
                       fmt(res.r[i].imag()) + "\n";
            std::cout << out;
        } else {
            std::string out = "{\n  \"u\": " + fmt(u) + ",\n  \"residuals\": [";
            for (int i = 0; i < 4; ++i) out += std::string(i ? ", " : "") + fmt_pair(res.r[i]);
            out += "],\n  \"max_abs\": " + fmt(res.max_abs()) + "\n}\n";
            std::cout << out;
        }
        return 0;
    }

    if (c_solve->parsed()) {
        const holo::LoopWeights w = holo::solve_holo_system(s_n, s_theta, s_sigma);
        if (format == "csv") {
            std::string out = "i,rho_i\n";
            for (int i = 0; i < 9; ++i) out += std::to_string(i + 1) + "," + fmt(w[i]) + "\n";
            std::cout << out;
        } else {
            std::string out = "{\n  \"rho\": [";
            for (int i = 0; i < 9; ++i) out += std::string(i ? ", " : "") + fmt(w[i]);
            out += "]\n}\n";
            std::cout << out;
        }
        return 0;
    }

    if (c_vloop->parsed()) {
        const double lambda = v_lambda.value();
        const double sigma = holo::spin(lambda);
        const double n = holo::fugacity_from_lambda(lambda);
        const double u = v_u ? *v_u : holo::spectral_from_angle(sigma, v_theta);
        const holo::SquareDomain dom(v_w, v_h, v_theta);
        const holo::MidEdge src = dom.mid_edge(holo::Vertex{0, 0}, holo::LegS);
        const holo::ObservableField f =
            holo::observable(dom, holo::compute_weights(lambda, u), n, sigma, src);
        double max_res = 0.0;
        std::string table;
        bool first = true;
        for (int y = 1; y < v_h - 1; ++y)
            for (int x = 1; x < v_w - 1; ++x) {
                const holo::Complex r =
                    holo::vertex_contour_residual(dom, f, holo::Vertex{x, y}, v_theta);
                max_res = std::max(max_res, std::abs(r));
                if (format == "csv") {
                    table += std::to_string(x) + "," + std::to_string(y) + "," +
                             fmt(r.real()) + "," + fmt(r.imag()) + "\n";
                } else {
                    table += first ? "\n" : ",\n";
                    first = false;
                    table += "    \"" + std::to_string(x) + "," + std::to_string(y) +
                             "\": " + fmt_pair(r);
                }
            }
        const double rel = f.max_abs() > 0 ? max_res / f.max_abs() : 0.0;
        if (format == "csv") {
            std::cout << "x,y,re,im\n" << table << "max_rel_residual," << fmt(rel) << ",,\n";
        } else {
            std::cout << "{\n  \"u\": " << fmt(u) << ",\n  \"n\": " << fmt(n)
                      << ",\n  \"sigma\": " << fmt(sigma) << ",\n  \"max_abs_F\": "
                      << fmt(f.max_abs()) << ",\n  \"residuals\": {" << table
                      << "\n  },\n  \"max_rel_residual\": " << fmt(rel) << "\n}\n";
        }
        return 0;
    }

    if (c_count->parsed()) {
        const holo::SawSeries s =
            holo::enumerate_saws(parse_lattice(lattice), max_len, budget, workers);
        std::cout << (format == "csv" ? holo::series_to_csv(s) : holo::series_to_json(s));
        return 0;
    }

    if (c_mu->parsed()) {
        const holo::LatticeKind kind = parse_lattice(lattice);
        const holo::SawSeries s = holo::enumerate_saws(kind, max_len, budget, workers);
        const auto method = estimator == "raw" ? holo::MuEstimator::RawRatio
                                               : holo::MuEstimator::LinearExtrapolation;
        if (estimator != "raw" && estimator != "extrapolate")
            throw CLI::ValidationError("--estimator", "must be raw or extrapolate");
        const double est = holo::connective_constant_estimate(s, method);
        const double exact = kind == holo::LatticeKind::Honeycomb ? holo::mu_honeycomb()
                             : kind == holo::LatticeKind::ThreeTwelve ? holo::mu_three_twelve()
                                                                      : holo::mu_martini();
        if (format == "csv") {
            std::cout << "key,value\nestimate," << fmt(est) << "\nexact," << fmt(exact)
                      << "\nrel_error," << fmt(std::abs(est - exact) / exact) << "\n";
        } else {
            std::cout << "{\n  \"lattice\": \"" << lattice << "\",\n  \"max_len\": " << max_len
                      << ",\n  \"estimator\": \"" << estimator << "\",\n  \"estimate\": "
                      << fmt(est) << ",\n  \"exact\": " << fmt(exact)
                      << ",\n  \"rel_error\": " << fmt(std::abs(est - exact) / exact) << "\n}\n";
        }
        return 0;
    }

    if (c_vobs->parsed()) {
        const double x = o_x ? *o_x : holo::honeycomb_xc();
        const holo::HoneycombPatch patch(o_nx, o_ny);
        const holo::SawObservableField f =
            holo::saw_observable(patch, x, o_sigma, holo::HexVertex{0, 0}, holo::HexVertex{-1, 0});
        double max_res = 0.0;
        std::string table;
        bool first = true;
        for (const holo::HexVertex& v : patch.vertices()) {
            if (!patch.is_interior(v)) continue;
            const holo::Complex r = holo::saw_vertex_residual(patch, f, v);
            max_res = std::max(max_res, std::abs(r));
            if (format == "csv") {
                table += std::to_string(v.x) + "," + std::to_string(v.y) + "," +
                         fmt(r.real()) + "," + fmt(r.imag()) + "\n";
            } else {
                table += first ? "\n" : ",\n";
                first = false;
                table += "    \"" + std::to_string(v.x) + "," + std::to_string(v.y) +
                         "\": " + fmt_pair(r);
            }
        }
        const double rel = f.max_abs() > 0 ? max_res / f.max_abs() : 0.0;
        if (format == "csv") {
            std::cout << "x,y,re,im\n" << table << "max_rel_residual," << fmt(rel) << ",,\n";
        } else {
            std::cout << "{\n  \"nx\": " << o_nx << ",\n  \"ny\": " << o_ny
                      << ",\n  \"hexagons\": " << patch.hexagon_count() << ",\n  \"x\": "
                      << fmt(x) << ",\n  \"sigma\": " << fmt(o_sigma)
                      << ",\n  \"max_abs_F\": " << fmt(f.max_abs()) << ",\n  \"residuals\": {"
                      << table << "\n  },\n  \"max_rel_residual\": " << fmt(rel) << "\n}\n";
        }
        return 0;
    }

    if (c_surf->parsed()) {
        if (orientation != "a" && orientation != "b")
            throw CLI::ValidationError("--orientation", "must be a or b");
        const auto o = orientation == "a" ? holo::Orientation::A : holo::Orientation::B;
        const holo::SawSeries s = holo::surface_saw_series(o, max_len, budget);
        std::cout << (format == "csv" ? holo::series_to_csv(s) : holo::series_to_json(s));
        return 0;
    }

    if (c_const->parsed()) {
        const std::pair<const char*, double> table[] = {
            {"mu_honeycomb", holo::mu_honeycomb()},
            {"mu_three_twelve", holo::mu_three_twelve()},
            {"mu_martini", holo::mu_martini()},
            {"mu_martini_literal_rhs", holo::mu_martini(true)},
            {"x_c", holo::honeycomb_xc()},
            {"y_c_a", holo::critical_fugacity(holo::Orientation::A)},
            {"y_c_b", holo::critical_fugacity(holo::Orientation::B)},
        };
        if (format == "csv") {
            std::string out = "name,value\n";
            for (const auto& [k, v] : table) out += std::string(k) + "," + fmt(v) + "\n";
            std::cout << out;
        } else {
            std::string out = "{";
            bool first = true;
            for (const auto& [k, v] : table) {
                out += first ? "\n" : ",\n";
                first = false;
                out += "  \"" + std::string(k) + "\": " + fmt(v);
            }
            out += "\n}\n";
            std::cout << out;
        }
        return 0;
    }

    if (c_seed->parsed()) {
        std::cout <<
            "# weight holomorphicity over the parameter grid (one corner shown)\n"
            "holo residuals --lambda-frac 1 8 --theta 1.5707963267948966\n"
            "holo residuals --lambda-frac 1 5 --theta 2.0943951023931953\n"
            "# linear-system recovery\n"
            "holo solve --n 0 --theta 1.5707963267948966 --sigma 0.625\n"
            "# loop-observable contour identity on the 3x3 domain\n"
            "holo verify-loop --width 3 --height 3 --lambda-frac 1 8 --theta 1.5707963267948966\n"
            "# walk counts and the independent-oracle series\n"
            "holo saw count --lattice honeycomb --max-len 15\n"
            "# connective-constant extrapolation to length 25\n"
            "holo saw mu --lattice honeycomb --max-len 25 --estimator extrapolate --workers 4\n"
            "# decorated-lattice constants (incl. the literal printed variant)\n"
            "holo constants --format json\n"
            "# SAW observable criticality on a 6-hexagon patch\n"
            "holo saw verify-obs --nx 6 --ny 4\n"
            "holo saw verify-obs --nx 6 --ny 4 --x 0.4870764901315773\n"
            "# surface series and critical fugacities\n"
            "holo saw surface --orientation a --max-len 12\n"
            "holo saw surface --orientation b --max-len 12\n";
        return 0;
    }

    return 0;
}

} // namespace

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    try {
        args = apply_config(std::move(args));
        std::reverse(args.begin(), args.end()); // CLI11 consumes a reversed vector
        return run(std::move(args));
    } catch (const CLI::CallForHelp&) {
        return 0;
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\n";
        return 1;
    } catch (const holo::NoSolutionError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const holo::DegenerateSolutionError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const holo::BudgetExceededError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
