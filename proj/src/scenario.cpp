#include "wicklab/scenario.hpp"

#include <chrono>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <sstream>

#include <json.hpp>

#include "wicklab/certificates.hpp"
#include "wicklab/models.hpp"

namespace fs = std::filesystem;

namespace wicklab::scenario {

namespace {

using cert::KonradyConstants;
using cutoff::CutoffFamily;
using cutoff::Grid;
using fock::TruncPtr;
using quasifree::QuotientMap;
using quasifree::TwoPointMatrix;
using wick::SmearingSpec;
using wick::WickOperator;

// everything a scenario builds before certificates run
struct Workspace {
    std::string name;
    TwoPointMatrix w2;
    Grid grid;
    fock::OneParticleSpace space;
    QuotientMap qm;
    TruncPtr trunc;
    SmearingSpec smearing;
    wick::QuadraticKernel kernel;
    WickOperator op;
    int n_max = 0;
    std::int64_t dim_cap = 20000;
    double quotient_tol = 1e-10;
    int probes = 100;
    int draws = 200;
    bool has_derivative = false;

    // model rebuild hook for the truncation scan
    std::function<TruncPtr(int)> trunc_maker;
};

RVec parse_rvec(const std::string& text) {
    auto v = parse_double_list(text);
    return Eigen::Map<RVec>(v.data(), v.size());
}

std::string resolve_path(const std::string& base, const std::string& p) {
    fs::path path(p);
    if (path.is_absolute()) return p;
    return (fs::path(base) / path).string();
}

SmearingSpec build_smearing(const ConfigSection& sec, const Grid& grid,
                            const std::string& base_dir) {
    const int d = grid.size();
    std::string type = sec.get_or("type", "bump");

    SmearingSpec spec;
    wick::SmearingTerm term;
    term.Qop = RMat::Identity(d, d);

    int q_order = sec.as_int_or("q_order", 0);
    if (q_order > 0) {
        if (grid.axes() != 1)
            throw config_error("difference smearing needs a 1-d grid");
        models::TimeGrid tg{grid.shape[0], grid.spacing[0], true};
        term.Qop = models::finite_difference(q_order, tg);
    }

    if (type == "bump") {
        std::string shape = sec.get_or("shape", "triangle");
        RVec g;
        if (shape == "triangle") {
            g = models::triangle_bump(d, sec.as_int_or("center", d / 2),
                                      sec.as_int_or("half_width", d / 4));
        } else if (shape == "gaussian") {
            g = models::gaussian_bump(d, sec.as_double_or("center", d / 2.0),
                                      sec.as_double_or("width", d / 6.0));
        } else {
            throw config_error("unknown bump shape: " + shape);
        }
        auto [f, wit] = models::sum_of_squares_smearing({g});
        term.f = f;
        term.witnesses = wit;
    } else if (type == "product_bump") {
        if (grid.axes() != 2)
            throw config_error("product_bump needs a 2-d grid");
        RVec gt = models::triangle_bump(grid.shape[0],
                                        sec.as_int_or("t_center", grid.shape[0] / 2),
                                        sec.as_int_or("t_half_width", grid.shape[0] / 2));
        RVec gx = models::triangle_bump(grid.shape[1],
                                        sec.as_int_or("x_center", grid.shape[1] / 2),
                                        sec.as_int_or("x_half_width", grid.shape[1] / 2));
        RVec g(d);
        for (int t = 0; t < grid.shape[0]; ++t)
            for (int x = 0; x < grid.shape[1]; ++x)
                g(t * grid.shape[1] + x) = gt(t) * gx(x);
        auto [f, wit] = models::sum_of_squares_smearing({g});
        term.f = f;
        term.witnesses = wit;
    } else if (type == "ones_partition") {
        // f = 1 decomposed through a squares partition of unity
        if (grid.axes() != 1)
            throw config_error("ones_partition needs a 1-d grid");
        std::vector<RVec> bumps;
        for (const auto& btxt : sec.get_all("bump")) bumps.push_back(parse_rvec(btxt));
        if (bumps.empty()) {
            bumps.push_back(models::triangle_bump(d, d / 4, d / 2));
            bumps.push_back(models::triangle_bump(d, (3 * d) / 4, d / 2));
        }
        cutoff::SquaresPartition part = cutoff::squares_partition(bumps);
        term.f = RVec::Ones(d);
        term.witnesses = part.chi;
    } else if (type == "indicator") {
        term.f = RVec::Zero(d);
        for (int site : parse_int_list(sec.require("sites"))) {
            if (site < 0 || site >= d)
                throw config_error("indicator site out of range");
            term.f(site) = 1.0;
        }
        // no witnesses: not class S
    } else if (type == "file") {
        return SmearingSpec::load(resolve_path(base_dir, sec.require("file")));
    } else {
        throw config_error("unknown smearing type: " + type);
    }

    spec.terms.push_back(std::move(term));
    spec.validate();
    return spec;
}

Workspace build_workspace(const Config& cfg, const std::string& base_dir) {
    Workspace ws;
    const ConfigSection* scen = cfg.find("scenario");
    if (!scen) throw config_error("missing [scenario] section");
    ws.name = scen->require("name");

    const ConfigSection* model = cfg.find("model");
    if (!model) throw config_error("missing [model] section");

    const ConfigSection* trunc_sec = cfg.find("truncation");
    ws.n_max = trunc_sec ? trunc_sec->as_int_or("n_max", 6) : 6;
    ws.dim_cap = trunc_sec ? trunc_sec->as_int_or("dim_cap", 20000) : 20000;
    ws.quotient_tol =
        trunc_sec ? trunc_sec->as_double_or("quotient_tol", 1e-10) : 1e-10;

    std::string type = model->require("type");
    if (type == "oscillator") {
        models::OscillatorModel m;
        m.omega = model->as_double_or("omega", 1.0);
        m.grid = {model->as_int_or("d_test", 8), model->as_double_or("dt", 0.7),
                  true};
        ws.w2 = models::oscillator_two_point(m);
        ws.grid = m.grid.as_grid();
    } else if (type == "chain") {
        models::ChainModel m;
        m.mass = model->as_double_or("mass", 1.0);
        m.sites = model->as_int_or("sites", 4);
        m.dx = model->as_double_or("dx", 0.5);
        m.tgrid = {model->as_int_or("t_points", 4),
                   model->as_double_or("dt", 0.5), true};
        ws.w2 = models::chain_two_point(m);
        ws.grid = m.as_grid();
    } else if (type == "custom") {
        ws.w2 = TwoPointMatrix::load(resolve_path(base_dir, model->require("w_file")));
        ws.grid = Grid{{ws.w2.dim()}, {model->as_double_or("dt", 1.0)}};
    } else {
        throw config_error("unknown model type: " + type);
    }

    auto [space, qm] = quasifree::one_particle_space(ws.w2, ws.quotient_tol);
    ws.space = space;
    ws.qm = qm;
    ws.trunc = fock::FockTruncation::make(space, ws.n_max, ws.dim_cap);
    ws.trunc_maker = [space = ws.space, cap = ws.dim_cap](int nm) {
        return fock::FockTruncation::make(space, nm, cap);
    };

    const ConfigSection* smear = cfg.find("smearing");
    if (!smear) throw config_error("missing [smearing] section");
    ws.smearing = build_smearing(*smear, ws.grid, base_dir);
    ws.has_derivative = smear->as_int_or("q_order", 0) > 0;

    ws.kernel = wick::kernel_from_smearing(ws.smearing, ws.qm);
    ws.op = wick::wick_square_operator(ws.kernel, ws.trunc);

    const ConfigSection* certs = cfg.find("certificates");
    ws.probes = certs ? certs->as_int_or("probes", 100) : 100;
    ws.draws = certs ? certs->as_int_or("draws", 200) : 200;
    return ws;
}

Rng cert_rng(const RunOptions& opts, const std::string& scenario,
             const std::string& cert) {
    return Rng(fnv1a(std::to_string(opts.seed) + "/" + scenario + "/" + cert));
}

void run_certificates(const Config& cfg, Workspace& ws, const RunOptions& opts,
                      RunReport& out) {
    const ConfigSection* certs = cfg.find("certificates");
    std::vector<std::string> names;
    if (certs && certs->has("run")) {
        names = split_list(certs->require("run"));
    } else {
        names = {"ladder", "ccr",        "monomial_bound", "state_moments",
                 "wick",   "nelson",     "wuest",          "konrady",
                 "commutator", "t1_scan"};
    }

    // the cutoff family is shared between its certificates
    std::optional<CutoffFamily> family;
    auto need_family = [&]() -> CutoffFamily& {
        if (!family) {
            std::vector<int> schedule;
            if (const ConfigSection* cs = cfg.find("cutoffs"))
                schedule = parse_int_list(cs->require("schedule"));
            else
                for (int n = 0; n <= ws.grid.full_cutoff(); ++n)
                    schedule.push_back(n);
            family = cutoff::build_cutoff_family(
                ws.smearing.single_square_terms(), ws.qm, ws.trunc, ws.grid,
                schedule);
        }
        return *family;
    };

    for (const std::string& name : names) {
        Rng rng = cert_rng(opts, ws.name, name);
        if (name == "ladder") {
            out.rows.push_back(cert::ladder_norm_certificate(
                std::min(4, ws.space.dim + 2), std::min(ws.n_max, 5), 50, rng));
        } else if (name == "ccr") {
            out.rows.push_back(
                cert::ccr_certificate(std::min(4, ws.space.dim + 1),
                                      std::min(ws.n_max, 5), 50, rng));
        } else if (name == "monomial_bound") {
            out.rows.push_back(cert::monomial_bound_certificate(ws.draws, rng));
        } else if (name == "ordering_factor") {
            out.rows.push_back(cert::ordering_factor_certificate(
                std::max(50, ws.draws / 4), rng));
        } else if (name == "state_moments") {
            out.rows.push_back(cert::state_moment_certificate(
                ws.qm, ws.trunc, std::min(ws.probes, 100), rng));
        } else if (name == "wick") {
            out.rows.push_back(cert::hermiticity_certificate(ws.op));
            Rng rng2 = cert_rng(opts, ws.name, name + "_pairing");
            out.rows.push_back(
                cert::wick_pairing_certificate(ws.op, ws.qm, 20, rng2));
            Rng rng3 = cert_rng(opts, ws.name, name + "_relbound");
            out.rows.push_back(
                cert::wick_relative_bound_certificate(ws.op, ws.probes, rng3));
        } else if (name == "nelson") {
            out.rows.push_back(
                cert::nelson_certificate(ws.op.T(), ws.trunc, ws.probes, rng));
        } else if (name == "wuest") {
            const ConfigSection* certs_sec = cfg.find("certificates");
            double d = std::max(ws.kernel.norm_FK, ws.kernel.norm_FKbar);
            if (certs_sec && certs_sec->has("wuest_d"))
                d = certs_sec->as_double("wuest_d");
            out.rows.push_back(cert::wuest_certificate(ws.op.A, ws.op.B(), d,
                                                       ws.trunc, ws.probes, rng));
        } else if (name == "konrady") {
            KonradyConstants consts =
                cert::konrady_constant(ws.smearing, ws.qm, ws.grid, ws.kernel);
            out.rows.push_back(cert::konrady_certificate(
                ws.op.A, ws.op.B(), consts, ws.trunc, ws.probes, rng));
        } else if (name == "commutator") {
            out.rows.push_back(cert::commutator_identity_certificate(
                ws.qm, ws.trunc, std::min(ws.probes, 50), rng));
        } else if (name == "t1_scan") {
            out.rows.push_back(
                cert::t1_scan(wick::compression_T1(ws.op),
                              ws.smearing.class_S() && !ws.has_derivative));
        } else if (name == "locality") {
            const ConfigSection* loc = cfg.find("locality");
            if (!loc)
                throw config_error("locality certificate needs a [locality] "
                                   "section with a region");
            // the region check may carry its own (compactly supported)
            // smearing; otherwise the scenario smearing is used
            SmearingSpec spec = loc->has("type")
                                    ? build_smearing(*loc, ws.grid, ".")
                                    : ws.smearing;
            out.rows.push_back(wick::support_invariance_check(
                spec, parse_int_list(loc->require("region")), ws.qm,
                ws.trunc));
        } else if (name == "squares_partition") {
            std::vector<RVec> bumps;
            if (const ConfigSection* sp = cfg.find("partition"))
                for (const auto& btxt : sp->get_all("bump"))
                    bumps.push_back(parse_rvec(btxt));
            if (bumps.empty()) {
                int d = ws.grid.size();
                bumps = {models::triangle_bump(d, d / 4, d / 2),
                         models::triangle_bump(d, (3 * d) / 4, d / 2)};
            }
            out.rows.push_back(cutoff::squares_partition_certificate(
                cutoff::squares_partition(bumps)));
        } else if (name == "cutoff_family") {
            CutoffFamily& fam = need_family();
            out.rows.push_back(cutoff::family_monotone_certificate(fam));
            out.rows.push_back(cutoff::family_exactness_certificate(fam));
            Rng rng2 = cert_rng(opts, ws.name, "cutoff_pairing");
            out.rows.push_back(cutoff::family_pairing_certificate(
                fam, ws.qm, std::min(ws.probes, 20), rng2));
        } else if (name == "inverse_inequality") {
            out.rows.push_back(
                cutoff::inverse_inequality_certificate(need_family()));
        } else if (name == "graph_limit") {
            std::optional<std::pair<double, double>> interval;
            if (const ConfigSection* gl = cfg.find("graph_limit"))
                if (gl->has("interval_a") && gl->has("interval_b"))
                    interval = std::make_pair(gl->as_double("interval_a"),
                                              gl->as_double("interval_b"));
            cutoff::GraphLimitResult res = cutoff::graph_limit_experiment(
                need_family(), 3, rng, interval);
            out.rows.push_back(res.report);
            // per-step experiment lines
            std::ostringstream hdr;
            hdr << "cutoff,c_n,increment_min_eig";
            for (std::size_t p = 0; p < res.rows.front().resolvent_residuals.size();
                 ++p)
                hdr << ",resolvent_residual_" << p;
            for (std::size_t p = 0;
                 p < res.rows.front().projection_residuals.size(); ++p)
                hdr << ",projection_residual_" << p;
            hdr << ",projector_rank";
            out.step_csv.push_back(hdr.str());
            for (const auto& row : res.rows) {
                std::ostringstream line;
                line << row.cutoff << "," << format_double(row.c_n) << ","
                     << format_double(row.increment_min_eig);
                for (double r : row.resolvent_residuals)
                    line << "," << format_double(r);
                for (double r : row.projection_residuals)
                    line << "," << format_double(r);
                line << "," << row.projector_rank;
                out.step_csv.push_back(line.str());
            }
        } else if (name == "stability") {
            const ConfigSection* st = cfg.find("stability");
            std::vector<int> list =
                st ? parse_int_list(st->require("n_max_list"))
                   : std::vector<int>{4, 5, 6};
            int k = st ? st->as_int_or("k_eigs", 3) : 3;
            double tol = st ? st->as_double_or("shift_tol", 1e-3) : 1e-3;
            auto builder = [&ws](TruncPtr t) {
                return wick::wick_square_operator(ws.kernel, t).T();
            };
            out.rows.push_back(cert::truncation_stability(
                builder, ws.trunc_maker, list, k, tol));
        } else if (name == "chain_oracle") {
            const ConfigSection* model = cfg.find("model");
            models::ChainModel m;
            m.mass = model->as_double_or("mass", 1.0);
            m.sites = model->as_int_or("sites", 4);
            m.dx = model->as_double_or("dx", 0.5);
            m.tgrid = {model->as_int_or("t_points", 4),
                       model->as_double_or("dt", 0.5), true};
            out.rows.push_back(models::chain_oracle_certificate(m));
        } else {
            throw config_error("unknown certificate: " + name);
        }
    }
}

std::string csv_escape(const std::string& s) {
    std::string out = s;
    for (char& c : out)
        if (c == ',') c = ';';
    return out;
}

} // namespace

std::string RunReport::csv(bool with_header) const {
    std::ostringstream out;
    if (with_header)
        out << "scenario,certificate,constant_names,constant_values,"
               "worst_residual,tolerance,pass\n";
    for (const auto& row : rows) {
        std::string names, values;
        for (std::size_t i = 0; i < row.constants.size(); ++i) {
            if (i) {
                names += ";";
                values += ";";
            }
            names += row.constants[i].first;
            values += format_double(row.constants[i].second);
        }
        out << scenario << "," << csv_escape(row.name) << "," << names << ","
            << values << "," << format_double(row.worst_residual) << ","
            << format_double(row.tolerance) << "," << (row.pass ? 1 : 0)
            << "\n";
    }
    return out.str();
}

std::string RunReport::json() const {
    nlohmann::json j;
    j["scenario"] = scenario;
    j["digest"] = digest;
    j["overall_pass"] = overall_pass;
    j["warnings"] = warnings;
    j["wall_ms"] = wall_ms;
    j["certificates"] = nlohmann::json::array();
    for (const auto& row : rows) {
        nlohmann::json r;
        r["name"] = row.name;
        r["statement"] = row.statement;
        nlohmann::json consts = nlohmann::json::object();
        for (const auto& [k, v] : row.constants) consts[k] = v;
        r["constants"] = consts;
        r["probes"] = row.probes;
        r["worst_residual"] = row.worst_residual;
        r["tolerance"] = row.tolerance;
        r["pass"] = row.pass;
        r["notes"] = row.notes;
        r["warnings"] = row.warnings;
        j["certificates"].push_back(r);
    }
    return j.dump(2);
}

RunReport run_scenario(const Config& cfg, const std::string& raw_text,
                       const RunOptions& opts, const std::string& base_dir) {
    auto start = std::chrono::steady_clock::now();

    RunReport rep;
    Workspace ws = build_workspace(cfg, base_dir);
    rep.scenario = ws.name;
    rep.digest = to_hex(fnv1a(raw_text));

    run_certificates(cfg, ws, opts, rep);

    for (const auto& row : rep.rows) {
        if (!row.pass) rep.overall_pass = false;
        rep.warnings += static_cast<int>(row.warnings.size());
    }
    if (opts.strict && rep.warnings > 0) rep.overall_pass = false;

    rep.wall_ms = std::chrono::duration<double, std::milli>(
                      std::chrono::steady_clock::now() - start)
                      .count();
    return rep;
}

// --- bundled scenarios ------------------------------------------------------

namespace {

const char* kOscillatorWickSquare = R"cfg(
[scenario]
name = oscillator-wick-square

[model]
type = oscillator
omega = 1.0
d_test = 8
dt = 1.2

[truncation]
n_max = 6

[smearing]
type = bump
shape = gaussian
center = 3.5
width = 1.8
q_order = 0

[locality]
region = 0,1,2,3
type = bump
shape = triangle
center = 2
half_width = 2

[stability]
n_max_list = 5,6,7
k_eigs = 3
shift_tol = 1e-3

[certificates]
run = ladder,ccr,monomial_bound,ordering_factor,state_moments,wick,nelson,wuest,konrady,commutator,t1_scan,locality,stability
probes = 100
draws = 200
)cfg";

const char* kOscillatorCutoffFamily = R"cfg(
[scenario]
name = oscillator-cutoff-family

[model]
type = oscillator
omega = 1.0
d_test = 8
dt = 0.7

[truncation]
n_max = 5

[smearing]
type = ones_partition

[cutoffs]
schedule = 0,1,2,3,4

[certificates]
run = squares_partition,cutoff_family,inverse_inequality,graph_limit
probes = 40
)cfg";

const char* kChainWickSquare = R"cfg(
[scenario]
name = chain-wick-square

[model]
type = chain
mass = 1.0
sites = 4
dx = 0.5
t_points = 4
dt = 0.5

[truncation]
n_max = 4

[smearing]
type = product_bump
t_center = 2
t_half_width = 2
x_center = 2
x_half_width = 2

[certificates]
run = chain_oracle,state_moments,wick,wuest,konrady,t1_scan
probes = 60
)cfg";

const char* kOscillatorDerivative = R"cfg(
[scenario]
name = oscillator-derivative

[model]
type = oscillator
omega = 1.0
d_test = 8
dt = 0.7

[truncation]
n_max = 5

[smearing]
type = bump
shape = triangle
center = 3
half_width = 2
q_order = 1

[certificates]
run = wick,nelson,wuest,konrady,t1_scan
probes = 60
)cfg";

const char* kAdversarialWuest = R"cfg(
[scenario]
name = adversarial-wuest

[model]
type = oscillator
omega = 1.0
d_test = 8
dt = 0.7

[truncation]
n_max = 5

[smearing]
type = bump
shape = triangle
center = 3
half_width = 2

[certificates]
run = wuest
wuest_d = 0
probes = 40
)cfg";

struct Bundled {
    const char* name;
    const char* text;
    bool in_suite;
};

const Bundled kBundled[] = {
    {"oscillator-wick-square", kOscillatorWickSquare, true},
    {"oscillator-cutoff-family", kOscillatorCutoffFamily, true},
    {"chain-wick-square", kChainWickSquare, true},
    {"oscillator-derivative", kOscillatorDerivative, true},
    {"adversarial-wuest", kAdversarialWuest, false},
};

} // namespace

std::vector<std::string> bundled_names() {
    std::vector<std::string> out;
    for (const auto& b : kBundled) out.push_back(b.name);
    return out;
}

std::vector<std::string> default_suite() {
    std::vector<std::string> out;
    for (const auto& b : kBundled)
        if (b.in_suite) out.push_back(b.name);
    return out;
}

std::string bundled_text(const std::string& name) {
    for (const auto& b : kBundled)
        if (name == b.name) return b.text;
    throw config_error("unknown bundled scenario: " + name);
}

int run_cli(const std::string& target, const RunOptions& opts) {
    struct Job {
        std::string text;
        std::string base_dir;
    };
    std::vector<Job> jobs;
    std::vector<RunReport> reports;
    try {
        if (target.empty()) {
            for (const std::string& n : default_suite())
                jobs.push_back({bundled_text(n), "."});
        } else if (fs::exists(target)) {
            std::ifstream in(target);
            std::ostringstream ss;
            ss << in.rdbuf();
            std::string parent = fs::path(target).parent_path().string();
            jobs.push_back({ss.str(), parent.empty() ? "." : parent});
        } else {
            jobs.push_back({bundled_text(target), "."});
        }
        reports.resize(jobs.size());

        int workers = std::max(1, opts.workers);
        std::size_t next = 0;
        while (next < jobs.size()) {
            std::size_t batch = std::min<std::size_t>(workers, jobs.size() - next);
            std::vector<std::future<RunReport>> futs;
            for (std::size_t i = 0; i < batch; ++i) {
                const auto& job = jobs[next + i];
                futs.push_back(std::async(std::launch::async, [&job, &opts] {
                    Config cfg = Config::parse(job.text);
                    return run_scenario(cfg, job.text, opts, job.base_dir);
                }));
            }
            for (std::size_t i = 0; i < batch; ++i)
                reports[next + i] = futs[i].get();
            next += batch;
        }
    } catch (const config_error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const model_error& e) {
        std::cerr << "model error: " << e.what() << "\n";
        return 2;
    } catch (const precondition_error& e) {
        std::cerr << "precondition error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }

    // all scenarios built and ran; now write outputs
    fs::create_directories(opts.out_dir);
    bool all_pass = true;
    std::ostringstream suite;
    for (std::size_t i = 0; i < reports.size(); ++i) {
        const RunReport& rep = reports[i];
        all_pass = all_pass && rep.overall_pass;
        suite << rep.csv(i == 0);

        fs::path base = fs::path(opts.out_dir) / rep.scenario;
        {
            std::ofstream out(base.string() + ".csv");
            out << rep.csv(true);
        }
        {
            std::ofstream out(base.string() + ".json");
            out << rep.json() << "\n";
        }
        if (!rep.step_csv.empty()) {
            std::ofstream out(base.string() + "-steps.csv");
            for (const auto& line : rep.step_csv) out << line << "\n";
        }
        if (!opts.quiet)
            for (const auto& row : rep.rows)
                std::cout << rep.scenario << " / " << row.name << ": "
                          << (row.pass ? "pass" : "FAIL")
                          << " (worst " << format_double(row.worst_residual)
                          << ", tol " << format_double(row.tolerance) << ")\n";
    }
    if (reports.size() > 1) {
        std::ofstream out(fs::path(opts.out_dir) / "suite.csv");
        out << suite.str();
    }
    return all_pass ? 0 : 1;
}

} // namespace wicklab::scenario
