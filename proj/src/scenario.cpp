#include "acn/scenario.hpp"

#include <fstream>
#include <sstream>
#include <vector>

#include "acn/graph.hpp"

namespace acn {

namespace {

Eigen::VectorXd parse_vector(std::istringstream& ls, const std::string& key) {
    std::vector<double> vals;
    double v;
    while (ls >> v) vals.push_back(v);
    if (vals.empty()) throw InputError("key `" + key + "` needs at least one value");
    Eigen::VectorXd out(static_cast<long>(vals.size()));
    for (size_t k = 0; k < vals.size(); ++k) out(static_cast<long>(k)) = vals[k];
    return out;
}

std::string dirname_of(const std::string& path) {
    auto slash = path.find_last_of('/');
    return slash == std::string::npos ? std::string(".") : path.substr(0, slash);
}

}  // namespace

ScenarioSpec ScenarioSpec::load(std::istream& in, const std::string& base_dir) {
    ScenarioSpec spec;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        std::string key;
        if (!(ls >> key)) continue;
        try {
            if (key == "graph") {
                std::string p;
                if (!(ls >> p)) throw InputError("graph key needs a path");
                spec.graph_path = (p.front() == '/' || base_dir.empty()) ? p : base_dir + "/" + p;
            } else if (key == "protocol") {
                if (!(ls >> spec.protocol)) throw InputError("protocol key needs a value");
                if (spec.protocol != "estimate" && spec.protocol != "consensus" &&
                    spec.protocol != "control")
                    throw InputError("unknown protocol `" + spec.protocol + "`");
            } else if (key == "alpha") {
                double v;
                if (!(ls >> v)) throw InputError("alpha needs a value");
                spec.alpha = v;
            } else if (key == "alpha-margin") {
                double v;
                if (!(ls >> v)) throw InputError("alpha-margin needs a value");
                spec.alpha_margin = v;
            } else if (key == "alpha-spectral") {
                double v;
                if (!(ls >> v)) throw InputError("alpha-spectral needs a value");
                spec.alpha_spectral = v;
            } else if (key == "epsilon") {
                std::string tok;
                if (!(ls >> tok)) throw InputError("epsilon needs a value or `auto`");
                if (tok != "auto") spec.epsilon = std::stod(tok);
            } else if (key == "tol") {
                double v;
                if (!(ls >> v)) throw InputError("tol needs a value");
                spec.tol = v;
            } else if (key == "max-rounds") {
                int v;
                if (!(ls >> v)) throw InputError("max-rounds needs an integer");
                spec.max_rounds = v;
            } else if (key == "seed") {
                unsigned long v;
                if (!(ls >> v)) throw InputError("seed needs an integer");
                spec.seed = v;
            } else if (key == "z") {
                std::string first;
                ls >> first;
                if (first == "ones") {
                    spec.z.reset();  // default
                } else {
                    std::istringstream rest(first + " " + std::string(std::istreambuf_iterator<char>(ls), {}));
                    spec.z = parse_vector(rest, "z");
                }
            } else if (key == "x0") {
                spec.x0 = parse_vector(ls, "x0");
            } else if (key == "c0") {
                std::string first;
                ls >> first;
                if (first == "zeros") {
                    spec.c0.reset();
                    spec.c0_is_z = false;
                } else if (first == "z") {
                    spec.c0_is_z = true;
                } else {
                    std::istringstream rest(first + " " + std::string(std::istreambuf_iterator<char>(ls), {}));
                    spec.c0 = parse_vector(rest, "c0");
                }
            } else {
                throw InputError("unknown scenario key `" + key + "`");
            }
        } catch (const InputError& e) {
            throw InputError("scenario line " + std::to_string(lineno) + ": " + e.what());
        }
    }
    if (spec.graph_path.empty()) throw InputError("scenario is missing the `graph` key");
    return spec;
}

ScenarioSpec ScenarioSpec::load_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open scenario file: " + path);
    return load(in, dirname_of(path));
}

double ScenarioSpec::resolve_alpha(const InfluenceGraph& g,
                                   std::optional<double> fallback_margin) const {
    int modes = (alpha ? 1 : 0) + (alpha_margin ? 1 : 0) + (alpha_spectral ? 1 : 0);
    if (modes > 1) throw InputError("set only one of alpha, alpha-margin, alpha-spectral");
    if (alpha) return *alpha;
    if (alpha_spectral) return *alpha_spectral / spectral_norm(g.weights());
    double margin = alpha_margin ? *alpha_margin : fallback_margin.value_or(0.0);
    if (margin <= 0.0) throw InputError("scenario does not determine alpha");
    return margin * alpha_bound(g);
}

Eigen::VectorXd ScenarioSpec::resolve_z(int n) const {
    if (!z) return Eigen::VectorXd::Ones(n);
    if (z->size() != n) throw DimensionMismatch(z->size(), n);
    return *z;
}

Eigen::VectorXd ScenarioSpec::resolve_x0(int n) const {
    if (!x0) throw InputError("scenario is missing the `x0` vector");
    if (x0->size() != n) throw DimensionMismatch(x0->size(), n);
    return *x0;
}

Eigen::VectorXd ScenarioSpec::resolve_c0(int n, const Eigen::VectorXd& zv) const {
    if (c0) {
        if (c0->size() != n) throw DimensionMismatch(c0->size(), n);
        return *c0;
    }
    if (c0_is_z) return zv;
    return Eigen::VectorXd::Zero(n);
}

ControlInstance load_control_instance(std::istream& in) {
    int n = -1;
    std::vector<std::pair<int, int>> edges;
    std::vector<int> loops;
    std::vector<WeightEntry> weights;
    std::vector<WeightEntry> uppers, lowers;
    std::optional<Eigen::VectorXd> rho_star, zv;
    std::optional<double> alpha;

    auto to_internal = [&](int one_based) {
        if (n < 0) throw InputError("record before `n` header");
        if (one_based < 1 || one_based > n)
            throw InputError("agent id " + std::to_string(one_based) + " out of range");
        return one_based - 1;
    };

    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        std::string tag;
        if (!(ls >> tag)) continue;
        try {
            if (tag == "n") {
                if (!(ls >> n) || n <= 0) throw InputError("bad agent count");
            } else if (tag == "e") {
                int i, j;
                if (!(ls >> i >> j)) throw InputError("edge line needs two agent ids");
                int a = to_internal(i), b = to_internal(j);
                double wij = 1.0, wji = 1.0;
                ls >> wij >> wji;
                edges.emplace_back(a, b);
                weights.push_back({a, b, wij});
                weights.push_back({b, a, wji});
            } else if (tag == "s") {
                int i;
                if (!(ls >> i)) throw InputError("self-loop line needs an agent id");
                int a = to_internal(i);
                double wii = 1.0;
                ls >> wii;
                loops.push_back(a);
                weights.push_back({a, a, wii});
            } else if (tag == "u" || tag == "l") {
                int i, j;
                double v;
                if (!(ls >> i >> j >> v)) throw InputError("bound line needs `i j value`");
                (tag == "u" ? uppers : lowers).push_back({to_internal(i), to_internal(j), v});
            } else if (tag == "us" || tag == "ls") {
                int i;
                double v;
                if (!(ls >> i >> v)) throw InputError("self-loop bound line needs `i value`");
                int a = to_internal(i);
                (tag == "us" ? uppers : lowers).push_back({a, a, v});
            } else if (tag == "rho*") {
                rho_star = parse_vector(ls, "rho*");
            } else if (tag == "z") {
                zv = parse_vector(ls, "z");
            } else if (tag == "alpha") {
                double v;
                if (!(ls >> v)) throw InputError("alpha needs a value");
                alpha = v;
            } else {
                throw InputError("unknown record tag `" + tag + "`");
            }
        } catch (const InputError& e) {
            throw InputError("control file line " + std::to_string(lineno) + ": " + e.what());
        }
    }
    if (n < 0) throw InputError("control file has no `n` header");
    if (!rho_star) throw InputError("control file is missing the `rho*` vector");
    if (!zv) throw InputError("control file is missing the `z` vector");
    if (!alpha) throw InputError("control file is missing `alpha`");
    if (rho_star->size() != n) throw DimensionMismatch(rho_star->size(), n);
    if (zv->size() != n) throw DimensionMismatch(zv->size(), n);

    InfluenceGraph g = InfluenceGraph::build(n, std::move(edges), std::move(loops), weights);
    // Bounds default to the current weight: entries without bound lines stay
    // frozen at their initial value.
    Eigen::MatrixXd upper = g.weights(), lower = g.weights();
    for (const auto& e : uppers) upper(e.i, e.j) = e.w;
    for (const auto& e : lowers) lower(e.i, e.j) = e.w;
    return ControlInstance::make(std::move(g), std::move(upper), std::move(lower),
                                 std::move(*rho_star), std::move(*zv), *alpha);
}

ControlInstance load_control_instance_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open control file: " + path);
    return load_control_instance(in);
}

}  // namespace acn
