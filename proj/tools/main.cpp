// dilkit command-line front end: parse JSON documents, dispatch to the
// library, print deterministic reports and emit machine-checkable
// certificates.
//
// Exit codes: 0 verdict true / object constructed, 1 verdict false (witness
// in the report), 2 malformed input or usage error.

#include "dilkit/io.hpp"
#include "dilkit/rng.hpp"

#include "CLI11.hpp"

#include <cmath>
#include <iostream>
#include <sstream>

using namespace dilkit;

namespace {

struct Common {
    std::string out;
    bool json = false;
    bool quiet = false;
    double eq_tol = -1.0;
    double psd_tol = -1.0;
    double rank_tol = -1.0;
};

void add_common(CLI::App* cmd, Common& common) {
    cmd->add_option("--out", common.out, "write the certificate/report JSON to this path");
    cmd->add_flag("--json", common.json, "machine-readable report on stdout");
    cmd->add_flag("--quiet", common.quiet, "suppress the report (exit code only)");
    cmd->add_option("--tol", common.eq_tol, "override eq_tol");
    cmd->add_option("--psd-tol", common.psd_tol, "override psd_tol");
    cmd->add_option("--rank-tol", common.rank_tol, "override rank_tol");
}

Tolerance resolve_tol(const Common& common, const std::optional<Tolerance>& doc_tol) {
    Tolerance tol = doc_tol.value_or(Tolerance{});
    if (common.eq_tol > 0.0) tol.eq_tol = common.eq_tol;
    if (common.psd_tol > 0.0) tol.psd_tol = common.psd_tol;
    if (common.rank_tol > 0.0) tol.rank_tol = common.rank_tol;
    tol.validate();
    return tol;
}

void render(std::ostream& os, const Json& j, const std::string& prefix) {
    if (j.is_object()) {
        for (const auto& [key, value] : j.items())
            render(os, value, prefix.empty() ? key : prefix + "." + key);
    } else if (j.is_array() && !j.empty() && (j[0].is_object() || j[0].is_array())) {
        for (std::size_t i = 0; i < j.size(); ++i)
            render(os, j[i], prefix + "[" + std::to_string(i) + "]");
    } else {
        os << prefix << ": " << j.dump() << "\n";
    }
}

// The stdout report stays summary-sized; the full certificate (when one
// exists) goes to --out.
void emit(const Common& common, const Json& report, const Json* certificate = nullptr) {
    if (!common.quiet) {
        if (common.json)
            std::cout << report.dump(2) << "\n";
        else
            render(std::cout, report, "");
    }
    if (!common.out.empty()) save_json(common.out, certificate ? *certificate : report);
}

// Reports stay readable: witnesses are attached only when small.
void attach_witness(Json& report, const ComplexMatrix& witness) {
    if (!witness.empty() && witness.size() <= 64) report["witness"] = matrix_to_json(witness);
}

std::vector<Complex> parse_coeffs(const std::string& text) {
    std::vector<Complex> coeffs;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        const auto colon = item.find(':');
        try {
            if (colon == std::string::npos)
                coeffs.emplace_back(std::stod(item), 0.0);
            else
                coeffs.emplace_back(std::stod(item.substr(0, colon)),
                                    std::stod(item.substr(colon + 1)));
        } catch (const std::exception&) {
            throw IoError("cannot parse polynomial coefficient '" + item +
                          "' (expected re or re:im)");
        }
    }
    if (coeffs.empty()) throw IoError("empty polynomial");
    return coeffs;
}

std::vector<Complex> circle_samples(std::size_t count) {
    std::vector<Complex> samples;
    for (std::size_t j = 0; j < count; ++j) {
        const double theta = 2.0 * M_PI * static_cast<double>(j) / static_cast<double>(count);
        samples.emplace_back(std::cos(theta), std::sin(theta));
    }
    return samples;
}

const ComplexMatrix& require_matrix(const Document& doc) {
    if (!doc.matrix) throw IoError("expected a document of kind 'matrix', got '" + doc.kind + "'");
    return *doc.matrix;
}
const MatrixMap& require_map(const Document& doc) {
    if (!doc.map) throw IoError("expected a document of kind 'map', got '" + doc.kind + "'");
    return *doc.map;
}
const Povm& require_povm(const Document& doc) {
    if (!doc.povm) throw IoError("expected a document of kind 'povm', got '" + doc.kind + "'");
    return *doc.povm;
}
const FiniteKernel& require_kernel(const Document& doc) {
    if (!doc.kernel) throw IoError("expected a document of kind 'kernel', got '" + doc.kind + "'");
    return *doc.kernel;
}
const CommutingTuple& require_tuple(const Document& doc) {
    if (!doc.tuple) throw IoError("expected a document of kind 'tuple', got '" + doc.kind + "'");
    return *doc.tuple;
}

// ---- subcommand bodies ------------------------------------------------------

int run_check_cp(const std::string& file, const Common& common) {
    Document doc = load_document(file);
    Tolerance tol = resolve_tol(common, doc.tolerance);
    const MatrixMap& phi = require_map(doc);
    CpVerdict verdict = is_completely_positive(phi, tol);
    Json report{{"command", "check-cp"},
                {"completely_positive", verdict.cp},
                {"min_choi_eigenvalue", verdict.min_eigenvalue},
                {"hermiticity_preserving", phi.hermiticity_preserving(tol)}};
    if (!verdict.cp) attach_witness(report, verdict.witness);
    emit(common, report);
    return verdict.cp ? 0 : 1;
}

int run_stinespring(const std::string& file, const Common& common) {
    Document doc = load_document(file);
    Tolerance tol = resolve_tol(common, doc.tolerance);
    const MatrixMap& phi = require_map(doc);
    CpVerdict verdict = is_completely_positive(phi, tol);
    if (!verdict.cp) {
        Json report{{"command", "stinespring"},
                    {"completely_positive", false},
                    {"min_choi_eigenvalue", verdict.min_eigenvalue}};
        attach_witness(report, verdict.witness);
        emit(common, report);
        return 1;
    }
    DilationPair pair = stinespring(phi, tol);
    MatrixMap compressed = pair.compression();
    double dilation = 0.0;
    for (std::size_t i = 0; i < phi.images().size(); ++i)
        dilation = std::max(dilation, max_abs_diff(compressed.images()[i], phi.images()[i]));
    PairResiduals residuals = pair_residuals(pair);
    Json report{{"command", "stinespring"},
                {"K_dim", pair.K_dim},
                {"dilation_residual", dilation},
                {"norm_identity_residual", residuals.norm_identity},
                {"representation_residual",
                 std::max(residuals.star,
                          std::max(residuals.multiplicativity, residuals.unit))}};
    Json cert = stinespring_certificate(phi, pair);
    cert["report"] = report;
    emit(common, report, &cert);
    return 0;
}

int run_verify_dilation(const std::string& file, const Common& common) {
    Json cert = read_json_file(file);
    Tolerance tol = resolve_tol(common, std::nullopt);
    VerifyResult result = verify_certificate(cert, tol);
    Json report{{"command", "verify-dilation"},
                {"kind", result.kind},
                {"ok", result.ok},
                {"max_residual", result.max_residual},
                {"failures", result.failures}};
    emit(common, report);
    return result.ok ? 0 : 1;
}

int run_match_minimal(const std::string& file1, const std::string& file2, const Common& common) {
    Json cert1 = read_json_file(file1);
    Json cert2 = read_json_file(file2);
    Tolerance tol = resolve_tol(common, std::nullopt);
    for (const Json* c : {&cert1, &cert2})
        if (!c->contains("kind") || (*c)["kind"] != "stinespring-certificate")
            throw IoError("match-minimal expects two stinespring certificates");
    DilationPair p1 = pair_from_json(cert1.at("pair"), "pair1");
    DilationPair p2 = pair_from_json(cert2.at("pair"), "pair2");
    ComplexMatrix w;
    try {
        w = match_minimal(p1, p2, tol);
    } catch (const PreconditionError& e) {
        Json report{{"command", "match-minimal"}, {"matched", false}, {"reason", e.what()}};
        emit(common, report);
        return 1;
    }
    double link = max_abs_diff(w * p1.V, p2.V);
    double intertwine = 0.0;
    for (std::size_t p = 0; p < p1.d; ++p)
        for (std::size_t q = 0; q < p1.d; ++q)
            intertwine =
                std::max(intertwine, max_abs_diff(w * p1.rep(p, q), p2.rep(p, q) * w));
    Json report{{"command", "match-minimal"},
                {"matched", true},
                {"linking_residual", link},
                {"intertwining_residual", intertwine}};
    Json cert = match_certificate(p1, p2, w);
    cert["report"] = report;
    emit(common, report, &cert);
    return 0;
}

int run_naimark(const std::string& file, const Common& common) {
    Document doc = load_document(file);
    Tolerance tol = resolve_tol(common, doc.tolerance);
    const Povm& povm = require_povm(doc);
    PovmVerdict verdict = validate_povm(povm, tol);
    if (!verdict.valid) {
        Json effects = Json::array();
        for (std::size_t i = 0; i < verdict.effect_verdicts.size(); ++i)
            effects.push_back(Json{{"effect", i},
                                   {"psd", verdict.effect_verdicts[i].psd},
                                   {"min_eigenvalue", verdict.effect_verdicts[i].min_eigenvalue}});
        Json report{{"command", "naimark"},
                    {"valid", false},
                    {"sum_residual", verdict.sum_residual},
                    {"effects", effects}};
        emit(common, report);
        return 1;
    }
    NaimarkDilation dilation = naimark_dilate(povm, tol);
    NaimarkReport check = verify_naimark(povm, dilation, tol);
    Json report{{"command", "naimark"},
                {"K_dim", dilation.K_dim},
                {"compression_residual", check.compression_residual},
                {"isometry_residual", check.isometry_residual},
                {"pvm_residual", check.pvm_residual}};
    Json cert = naimark_certificate(povm, dilation);
    cert["report"] = report;
    emit(common, report, &cert);
    return 0;
}

int run_verify_naimark(const std::string& file, const Common& common) {
    Json cert = read_json_file(file);
    if (!cert.contains("kind") || cert["kind"] != "naimark-certificate")
        throw IoError("verify-naimark expects a naimark certificate");
    Tolerance tol = resolve_tol(common, std::nullopt);
    VerifyResult result = verify_certificate(cert, tol);
    Json report{{"command", "verify-naimark"},
                {"ok", result.ok},
                {"max_residual", result.max_residual},
                {"failures", result.failures}};
    emit(common, report);
    return result.ok ? 0 : 1;
}

int run_halmos(const std::string& file, const Common& common) {
    Document doc = load_document(file);
    Tolerance tol = resolve_tol(common, doc.tolerance);
    const ComplexMatrix& a = require_matrix(doc);
    const double norm = operator_norm(a);
    if (!a.is_square() || norm > 1.0 + tol.eq_tol) {
        Json report{{"command", "halmos"}, {"contraction", false}, {"operator_norm", norm}};
        emit(common, report);
        return 1;
    }
    ComplexMatrix u = halmos_dilate(a, tol);
    Json report{{"command", "halmos"},
                {"operator_norm", norm},
                {"unitarity_residual",
                 max_abs_diff(adjoint(u) * u, ComplexMatrix::identity(u.rows()))}};
    Json cert = halmos_certificate(a, u);
    cert["report"] = report;
    emit(common, report, &cert);
    return 0;
}

int run_dilate_contraction(const std::string& file, std::size_t steps, const Common& common) {
    Document doc = load_document(file);
    Tolerance tol = resolve_tol(common, doc.tolerance);
    const ComplexMatrix& a = require_matrix(doc);
    const double norm = operator_norm(a);
    if (!a.is_square() || norm > 1.0 + tol.eq_tol) {
        Json report{{"command", "dilate-contraction"},
                    {"contraction", false},
                    {"operator_norm", norm}};
        emit(common, report);
        return 1;
    }
    PowerDilation d = sznagy_finite(a, steps, tol);
    Json residuals = Json::array();
    for (std::size_t m = 0; m <= steps; ++m)
        residuals.push_back(Json{
            {"power", m},
            {"residual", max_abs_diff(power_compression(d, m), matrix_power(a, m))}});
    Json report{{"command", "dilate-contraction"},
                {"horizon", steps},
                {"unitarity_residual",
                 max_abs_diff(adjoint(d.U) * d.U, ComplexMatrix::identity(d.U.rows()))},
                {"per_power_residuals", residuals}};
    Json cert = power_certificate(a, d);
    cert["report"] = report;
    emit(common, report, &cert);
    return 0;
}

int run_von_neumann(const std::string& file, const std::string& poly_text, std::size_t grid,
                    const Common& common) {
    Document doc = load_document(file);
    Tolerance tol = resolve_tol(common, doc.tolerance);
    const ComplexMatrix& a = require_matrix(doc);
    std::vector<Complex> poly = parse_coeffs(poly_text);
    VonNeumannReport r = von_neumann_check(a, poly, grid, tol);
    Json report{{"command", "von-neumann"}, {"holds", r.holds},     {"lhs", r.lhs},
                {"rhs", r.rhs},             {"slack", r.slack},     {"margin", r.margin},
                {"grid", grid},             {"degree", poly.size() - 1}};
    emit(common, report);
    return r.holds ? 0 : 1;
}

RationalMatrixFunction rational_from_json(const Json& j, const std::string& path) {
    RationalMatrixFunction f;
    if (!j.is_object() || !j.contains("numerator") || !j.contains("denominator"))
        throw IoError(path + ": rational functions need numerator and denominator fields");
    for (std::size_t i = 0; i < j["numerator"].size(); ++i)
        f.numerator.push_back(
            matrix_from_json(j["numerator"][i], path + ".numerator[" + std::to_string(i) + "]"));
    for (std::size_t i = 0; i < j["denominator"].size(); ++i) {
        const Json& c = j["denominator"][i];
        if (!c.is_array() || c.size() != 2)
            throw IoError(path + ".denominator: complex entries are [re, im] pairs");
        f.denominator.emplace_back(c[0].get<double>(), c[1].get<double>());
    }
    if (j.contains("poles"))
        for (const auto& c : j["poles"]) f.poles.emplace_back(c[0].get<double>(), c[1].get<double>());
    try {
        f.validate();
    } catch (const Error& e) {
        throw IoError(path + ": " + e.what());
    }
    return f;
}

int run_spectral_check(const std::string& file, const std::string& functions_file,
                       std::size_t circle, const std::string& samples_file,
                       const Common& common) {
    Document doc = load_document(file);
    Tolerance tol = resolve_tol(common, doc.tolerance);
    const ComplexMatrix& a = require_matrix(doc);

    Json fj = read_json_file(functions_file);
    if (!fj.contains("functions") || !fj["functions"].is_array() || fj["functions"].empty())
        throw IoError(functions_file + ": expected a nonempty 'functions' array");
    std::vector<RationalMatrixFunction> funcs;
    for (std::size_t i = 0; i < fj["functions"].size(); ++i)
        funcs.push_back(
            rational_from_json(fj["functions"][i], "functions[" + std::to_string(i) + "]"));

    std::vector<Complex> samples;
    if (!samples_file.empty()) {
        Json sj = read_json_file(samples_file);
        if (!sj.contains("samples") || !sj["samples"].is_array() || sj["samples"].empty())
            throw IoError(samples_file + ": expected a nonempty 'samples' array");
        for (const auto& c : sj["samples"]) {
            if (!c.is_array() || c.size() != 2)
                throw IoError(samples_file + ": samples are [re, im] pairs");
            samples.emplace_back(c[0].get<double>(), c[1].get<double>());
        }
    } else {
        samples = circle_samples(circle);
    }

    auto reports = complete_spectral_check(a, samples, funcs, tol);
    bool violation = false;
    Json items = Json::array();
    for (std::size_t i = 0; i < reports.size(); ++i) {
        const SpectralReport& r = reports[i];
        violation = violation || r.violation;
        items.push_back(Json{{"function", i},
                             {"lhs", r.lhs},
                             {"boundary_max", r.boundary_max},
                             {"slack", r.slack},
                             {"violation", r.violation},
                             {"spectral_radius", r.spectral_radius},
                             {"sample_radius", r.sample_radius}});
    }
    Json report{{"command", "spectral-check"},
                {"violation_found", violation},
                {"note", SpectralReport::evidence_note},
                {"functions", items}};
    emit(common, report);
    return violation ? 1 : 0;
}

int run_bram(const std::string& file, std::size_t degree, const Common& common) {
    Document doc = load_document(file);
    Tolerance tol = resolve_tol(common, doc.tolerance);
    const CommutingTuple& tuple = require_tuple(doc);
    validate_tuple(tuple, tol);
    BramCertificate cert = bram_test(tuple, words_up_to(tuple.generators(), degree), tol);
    Json report{{"command", "bram"},
                {"pass", cert.pass},
                {"degree_cap", cert.degree_cap},
                {"word_count", cert.words.size()},
                {"min_eigenvalue", cert.min_eigenvalue},
                {"note", "PASS is evidence up to the word-degree cap, never a subnormality "
                         "certificate; FAIL refutes subnormality"}};
    if (!cert.pass) attach_witness(report, cert.witness);
    emit(common, report);
    return cert.pass ? 0 : 1;
}

int run_hyponormal(const std::string& file, const Common& common) {
    Document doc = load_document(file);
    Tolerance tol = resolve_tol(common, doc.tolerance);
    PsdVerdict verdict = hyponormal_check(require_matrix(doc), tol);
    Json report{{"command", "hyponormal"},
                {"hyponormal", verdict.psd},
                {"min_eigenvalue", verdict.min_eigenvalue}};
    if (!verdict.psd) attach_witness(report, verdict.witness);
    emit(common, report);
    return verdict.psd ? 0 : 1;
}

int run_kernel_embed(const std::string& file, const Common& common) {
    Document doc = load_document(file);
    Tolerance tol = resolve_tol(common, doc.tolerance);
    const FiniteKernel& kernel = require_kernel(doc);
    KernelVerdict verdict = validate_kernel(kernel, tol);
    if (!verdict.positive) {
        Json report{{"command", "kernel-embed"},
                    {"positive_definite", false},
                    {"min_eigenvalue", verdict.min_eigenvalue}};
        attach_witness(report, verdict.witness);
        emit(common, report);
        return 1;
    }
    FeatureEmbedding e = build_embedding(kernel, tol);
    Json report{{"command", "kernel-embed"},
                {"dim", e.dim},
                {"gram_residual", max_abs_diff(embedding_gram(e.features), kernel.gram)}};
    Json cert = embedding_certificate(e);
    cert["report"] = report;
    emit(common, report, &cert);
    return 0;
}

int run_kernel_morphism(const std::string& file, const Common& common) {
    Json j = read_json_file(file);
    Tolerance tol = resolve_tol(
        common, j.contains("tolerance")
                    ? std::optional<Tolerance>(tolerance_from_json(j["tolerance"], "tolerance"))
                    : std::nullopt);
    KernelMorphism morphism;
    morphism.source = kernel_from_json(j.at("source"), "source");
    morphism.target = kernel_from_json(j.at("target"), "target");
    morphism.point_map = j.at("map").get<std::vector<std::size_t>>();
    FeatureEmbedding e1 = build_embedding(morphism.source, tol);
    FeatureEmbedding e2 = build_embedding(morphism.target, tol);
    ComplexMatrix u;
    try {
        u = morphism_isometry(morphism, e1, e2, tol);
    } catch (const PreconditionError& e) {
        Json report{{"command", "kernel-morphism"}, {"morphism", false}, {"reason", e.what()}};
        emit(common, report);
        return 1;
    }
    Json report{{"command", "kernel-morphism"},
                {"isometry_residual",
                 max_abs_diff(adjoint(u) * u, ComplexMatrix::identity(e1.dim))}};
    Json cert = isometry_certificate(morphism.source, morphism.target, morphism.point_map, u);
    cert["report"] = report;
    emit(common, report, &cert);
    return 0;
}

int run_second_quantize(const std::string& file, const Common& common) {
    Json j = read_json_file(file);
    Tolerance tol = resolve_tol(
        common, j.contains("tolerance")
                    ? std::optional<Tolerance>(tolerance_from_json(j["tolerance"], "tolerance"))
                    : std::nullopt);
    if (!j.contains("vectors") || !j["vectors"].is_array() || j["vectors"].empty())
        throw IoError(file + ": expected a nonempty 'vectors' array");
    std::vector<std::vector<Complex>> samples;
    for (const auto& vec : j["vectors"]) {
        std::vector<Complex> z;
        for (const auto& c : vec) {
            if (!c.is_array() || c.size() != 2)
                throw IoError(file + ": vector entries are [re, im] pairs");
            z.emplace_back(c[0].get<double>(), c[1].get<double>());
        }
        samples.push_back(std::move(z));
    }
    ComplexMatrix u = matrix_from_json(j.at("unitary"), "unitary");

    FiniteKernel kernel = exp_kernel(samples);
    FeatureEmbedding e = build_embedding(kernel, tol);
    std::vector<std::size_t> induced;
    ComplexMatrix gamma;
    try {
        induced = induced_point_map(samples, u, tol);
        gamma = second_quantize(e, samples, u, tol);
    } catch (const PreconditionError& err) {
        Json report{{"command", "second-quantize"}, {"closed", false}, {"reason", err.what()}};
        emit(common, report);
        return 1;
    }
    Json report{{"command", "second-quantize"},
                {"dim", e.dim},
                {"induced_permutation", induced},
                {"unitarity_residual",
                 max_abs_diff(adjoint(gamma) * gamma, ComplexMatrix::identity(e.dim))}};
    Json cert = isometry_certificate(kernel, kernel, induced, gamma);
    cert["report"] = report;
    emit(common, report, &cert);
    return 0;
}

int run_ucp_tower(const std::string& file, std::size_t horizon, std::size_t cap,
                  const Common& common) {
    Document doc = load_document(file);
    Tolerance tol = resolve_tol(common, doc.tolerance);
    const MatrixMap& phi = require_map(doc);
    UcpMap ucp;
    try {
        ucp = make_ucp(phi, tol);
    } catch (const PreconditionError& e) {
        Json report{{"command", "ucp-tower"}, {"ucp", false}, {"reason", e.what()}};
        emit(common, report);
        return 1;
    }
    DilationTower tower = build_tower(ucp, horizon, tol, cap);
    ProjectionLadder ladder = projection_ladder(tower, tol);
    double moment = 0.0;
    for (std::size_t p = 0; p < ucp.dim(); ++p)
        for (std::size_t q = 0; q < ucp.dim(); ++q) {
            ComplexMatrix unit(ucp.dim(), ucp.dim());
            unit(p, q) = 1.0;
            for (std::size_t k = 1; k <= horizon; ++k)
                moment = std::max(moment, max_abs_diff(tower_moment(tower, k, unit),
                                                       iterate_map(phi, k, unit)));
        }
    Json report{{"command", "ucp-tower"},
                {"horizon", horizon},
                {"E_dim", tower.E_dim},
                {"moment_residual", moment},
                {"ladder_ranks", ladder.ranks},
                {"ladder_gap_min_eigenvalues", ladder.gap_min_eigenvalues}};
    Json cert = tower_certificate(tower);
    cert["report"] = report;
    emit(common, report, &cert);
    return 0;
}

// ---- fuzz suites -------------------------------------------------------------

struct FuzzOutcome {
    std::size_t trials = 0;
    double worst = 0.0;
    bool ok = true;
};

FuzzOutcome fuzz_kernel(Rng& rng, std::size_t trials, const Tolerance& tol) {
    FuzzOutcome out;
    for (std::size_t t = 0; t < trials; ++t) {
        std::size_t m = 2 + rng.uniform_index(7);
        std::size_t r = 1 + rng.uniform_index(m);
        FiniteKernel k;
        for (std::size_t i = 0; i < m; ++i) k.points.push_back("p" + std::to_string(i));
        k.gram = random_psd(rng, m, r);
        FeatureEmbedding e = build_embedding(k, tol);
        out.worst = std::max(out.worst, max_abs_diff(embedding_gram(e.features), k.gram));
        if (e.dim != numerical_rank(e.features, tol)) out.ok = false;
    }
    out.trials = trials;
    out.ok = out.ok && out.worst <= 1e-8;
    return out;
}

FuzzOutcome fuzz_cp(Rng& rng, std::size_t trials, const Tolerance& tol) {
    FuzzOutcome out;
    for (std::size_t t = 0; t < trials; ++t) {
        std::size_t d = 2 + rng.uniform_index(2);
        std::size_t n = 2 + rng.uniform_index(2);
        std::vector<ComplexMatrix> kraus;
        for (std::size_t i = 0, count = 1 + rng.uniform_index(3); i < count; ++i)
            kraus.push_back(random_matrix(rng, d, n));
        MatrixMap phi = MatrixMap::from_kraus(d, n, kraus);
        DilationPair pair = stinespring(phi, tol);
        MatrixMap compressed = pair.compression();
        for (std::size_t i = 0; i < phi.images().size(); ++i)
            out.worst =
                std::max(out.worst, max_abs_diff(compressed.images()[i], phi.images()[i]));
        out.worst = std::max(out.worst, std::abs(std::pow(operator_norm(pair.V), 2.0) -
                                                 operator_norm(phi.unit_image())));
    }
    out.trials = trials;
    out.ok = out.worst <= 1e-7;
    return out;
}

FuzzOutcome fuzz_povm(Rng& rng, std::size_t trials, const Tolerance& tol) {
    FuzzOutcome out;
    for (std::size_t t = 0; t < trials; ++t) {
        std::size_t n = 2 + rng.uniform_index(3);
        std::size_t k = 2 + rng.uniform_index(4);
        std::vector<ComplexMatrix> pieces;
        ComplexMatrix sum(n, n);
        for (std::size_t i = 0; i < k; ++i) {
            pieces.push_back(random_psd(rng, n, n) +
                             ComplexMatrix::identity(n) * Complex(0.05, 0.0));
            sum = sum + pieces.back();
        }
        ComplexMatrix root_inv = inverse(sqrt_psd(sum, tol));
        Povm povm;
        povm.n = n;
        for (auto& p : pieces) povm.effects.push_back(root_inv * p * root_inv);
        NaimarkDilation d = naimark_dilate(povm, tol);
        NaimarkReport report = verify_naimark(povm, d, tol);
        out.worst = std::max({out.worst, report.compression_residual, report.isometry_residual,
                              report.pvm_residual});
    }
    out.trials = trials;
    out.ok = out.worst <= 1e-8;
    return out;
}

FuzzOutcome fuzz_contraction(Rng& rng, std::size_t trials, const Tolerance& tol) {
    FuzzOutcome out;
    for (std::size_t t = 0; t < trials; ++t) {
        std::size_t n = 1 + rng.uniform_index(6);
        ComplexMatrix a = random_with_norm(rng, n, rng.uniform(0.1, 1.0));
        std::size_t horizon = 1 + rng.uniform_index(8);
        PowerDilation d = sznagy_finite(a, horizon, tol);
        for (std::size_t m = 0; m <= horizon; ++m)
            out.worst = std::max(out.worst,
                                 max_abs_diff(power_compression(d, m), matrix_power(a, m)));
        VonNeumannReport vn =
            von_neumann_check(a, random_polynomial(rng, rng.uniform_index(9)), 4096, tol);
        if (!vn.holds) out.ok = false;
    }
    out.trials = trials;
    out.ok = out.ok && out.worst <= 1e-8;
    return out;
}

FuzzOutcome fuzz_bram(Rng& rng, std::size_t trials, const Tolerance& tol) {
    FuzzOutcome out;
    for (std::size_t t = 0; t < trials; ++t) {
        std::size_t n = 2 + rng.uniform_index(3);
        ComplexMatrix w = random_unitary(rng, n);
        std::vector<Complex> diag;
        for (std::size_t i = 0; i < n; ++i) diag.push_back(rng.complex_normal());
        ComplexMatrix normal = w * ComplexMatrix::diagonal(diag) * adjoint(w);
        BramCertificate cert = bram_test(CommutingTuple{{normal}}, words_up_to(1, 4), tol);
        if (!cert.pass) out.ok = false;
        out.worst = std::min(out.worst, cert.min_eigenvalue);
    }
    out.trials = trials;
    return out;
}

FuzzOutcome fuzz_tower(Rng& rng, std::size_t trials, const Tolerance& tol) {
    FuzzOutcome out;
    for (std::size_t t = 0; t < trials; ++t) {
        std::size_t n = 2 + rng.uniform_index(2);
        std::vector<ComplexMatrix> raw;
        ComplexMatrix sum(n, n);
        for (std::size_t i = 0, count = 1 + rng.uniform_index(2); i < count; ++i) {
            raw.push_back(random_matrix(rng, n, n));
            sum = sum + adjoint(raw.back()) * raw.back();
        }
        ComplexMatrix root_inv = inverse(sqrt_psd(sum, tol));
        for (auto& v : raw) v = v * root_inv;
        UcpMap u = make_ucp(MatrixMap::from_kraus(n, n, raw), tol);
        DilationTower tower = build_tower(u, 3, tol, 1 << 15);
        ProjectionLadder ladder = projection_ladder(tower, tol);
        for (double gap : ladder.gap_min_eigenvalues)
            out.worst = std::max(out.worst, std::max(0.0, -gap));
        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t q = 0; q < n; ++q) {
                ComplexMatrix unit(n, n);
                unit(p, q) = 1.0;
                for (std::size_t k = 1; k <= 3; ++k)
                    out.worst = std::max(out.worst,
                                         max_abs_diff(tower_moment(tower, k, unit),
                                                      iterate_map(u.phi, k, unit)));
            }
    }
    out.trials = trials;
    out.ok = out.worst <= 1e-8;
    return out;
}

int run_fuzz(const std::string& suite, std::uint64_t seed, std::size_t trials,
             const Common& common) {
    Tolerance tol = resolve_tol(common, std::nullopt);
    Rng rng(seed);
    FuzzOutcome outcome;
    if (suite == "kernel")
        outcome = fuzz_kernel(rng, trials, tol);
    else if (suite == "cp")
        outcome = fuzz_cp(rng, trials, tol);
    else if (suite == "povm")
        outcome = fuzz_povm(rng, trials, tol);
    else if (suite == "contraction")
        outcome = fuzz_contraction(rng, trials, tol);
    else if (suite == "bram")
        outcome = fuzz_bram(rng, trials, tol);
    else if (suite == "tower")
        outcome = fuzz_tower(rng, trials, tol);
    else
        throw IoError("unknown fuzz suite '" + suite +
                      "' (kernel|cp|povm|contraction|bram|tower)");
    Json report{{"command", "fuzz-" + suite},
                {"seed", seed},
                {"trials", outcome.trials},
                {"worst_residual", outcome.worst},
                {"ok", outcome.ok}};
    emit(common, report);
    return outcome.ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"dilkit: numerical dilation-theory toolkit"};
    app.require_subcommand(1);

    struct {
        std::string file, file2, poly, functions, samples, suite;
        std::size_t steps = 4, grid = 4096, degree = 2, horizon = 3, circle = 512, cap = 4096;
        std::uint64_t seed = 1729;
        std::size_t trials = 25;
    } args;
    std::map<const CLI::App*, Common> commons;
    std::map<const CLI::App*, std::function<int()>> actions;

    auto make = [&](const std::string& name, const std::string& desc) {
        CLI::App* cmd = app.add_subcommand(name, desc);
        add_common(cmd, commons[cmd]);
        return cmd;
    };

    {
        CLI::App* cmd = make("check-cp", "decide complete positivity of a map document");
        cmd->add_option("file", args.file, "map document")->required();
        actions[cmd] = [&, cmd] { return run_check_cp(args.file, commons[cmd]); };
    }
    {
        CLI::App* cmd = make("stinespring", "construct a minimal Stinespring pair");
        cmd->add_option("file", args.file, "map document")->required();
        actions[cmd] = [&, cmd] { return run_stinespring(args.file, commons[cmd]); };
    }
    {
        CLI::App* cmd = make("verify-dilation", "re-verify any emitted certificate");
        cmd->add_option("file", args.file, "certificate JSON")->required();
        actions[cmd] = [&, cmd] { return run_verify_dilation(args.file, commons[cmd]); };
    }
    {
        CLI::App* cmd = make("match-minimal", "match two minimal Stinespring certificates");
        cmd->add_option("file1", args.file, "first stinespring certificate")->required();
        cmd->add_option("file2", args.file2, "second stinespring certificate")->required();
        actions[cmd] = [&, cmd] {
            return run_match_minimal(args.file, args.file2, commons[cmd]);
        };
    }
    {
        CLI::App* cmd = make("naimark", "dilate a POVM to a projective measurement");
        cmd->add_option("file", args.file, "povm document")->required();
        actions[cmd] = [&, cmd] { return run_naimark(args.file, commons[cmd]); };
    }
    {
        CLI::App* cmd = make("verify-naimark", "re-verify a naimark certificate");
        cmd->add_option("file", args.file, "certificate JSON")->required();
        actions[cmd] = [&, cmd] { return run_verify_naimark(args.file, commons[cmd]); };
    }
    {
        CLI::App* cmd = make("halmos", "one-step unitary dilation of a contraction");
        cmd->add_option("file", args.file, "matrix document")->required();
        actions[cmd] = [&, cmd] { return run_halmos(args.file, commons[cmd]); };
    }
    {
        CLI::App* cmd = make("dilate-contraction", "finite-horizon unitary power dilation");
        cmd->add_option("file", args.file, "matrix document")->required();
        cmd->add_option("--steps", args.steps, "horizon N (default 4)");
        actions[cmd] = [&, cmd] {
            return run_dilate_contraction(args.file, args.steps, commons[cmd]);
        };
    }
    {
        CLI::App* cmd = make("von-neumann", "polynomial norm bound on the unit circle");
        cmd->add_option("file", args.file, "matrix document")->required();
        cmd->add_option("--poly", args.poly, "coefficients a0,a1,... (re or re:im)")->required();
        cmd->add_option("--grid", args.grid, "unit-circle grid size (default 4096)");
        actions[cmd] = [&, cmd] {
            return run_von_neumann(args.file, args.poly, args.grid, commons[cmd]);
        };
    }
    {
        CLI::App* cmd = make("spectral-check", "sampled spectral-set and complete checks");
        cmd->add_option("file", args.file, "matrix document")->required();
        cmd->add_option("--functions", args.functions, "rational function list JSON")->required();
        cmd->add_option("--circle", args.circle, "use a unit-circle grid of this size");
        cmd->add_option("--samples", args.samples, "boundary samples JSON");
        actions[cmd] = [&, cmd] {
            return run_spectral_check(args.file, args.functions, args.circle, args.samples,
                                      commons[cmd]);
        };
    }
    {
        CLI::App* cmd = make("bram", "block positivity test for a commuting tuple");
        cmd->add_option("file", args.file, "tuple document")->required();
        cmd->add_option("--degree", args.degree, "word degree cap (default 2)");
        actions[cmd] = [&, cmd] { return run_bram(args.file, args.degree, commons[cmd]); };
    }
    {
        CLI::App* cmd = make("hyponormal", "check A*A - AA* >= 0");
        cmd->add_option("file", args.file, "matrix document")->required();
        actions[cmd] = [&, cmd] { return run_hyponormal(args.file, commons[cmd]); };
    }
    {
        CLI::App* cmd = make("kernel-embed", "minimal Hilbert-space embedding of a kernel");
        cmd->add_option("file", args.file, "kernel document")->required();
        actions[cmd] = [&, cmd] { return run_kernel_embed(args.file, commons[cmd]); };
    }
    {
        CLI::App* cmd = make("kernel-morphism", "isometry induced by a kernel morphism");
        cmd->add_option("file", args.file, "morphism JSON (source, target, map)")->required();
        actions[cmd] = [&, cmd] { return run_kernel_morphism(args.file, commons[cmd]); };
    }
    {
        CLI::App* cmd = make("second-quantize", "unitary induced on an exponential kernel");
        cmd->add_option("file", args.file, "JSON with vectors and unitary")->required();
        actions[cmd] = [&, cmd] { return run_second_quantize(args.file, commons[cmd]); };
    }
    {
        CLI::App* cmd = make("ucp-tower", "finite-horizon dilation tower of a UCP map");
        cmd->add_option("file", args.file, "map document")->required();
        cmd->add_option("--horizon", args.horizon, "number of tower levels (default 3)");
        cmd->add_option("--cap", args.cap, "top dimension cap (default 4096)");
        actions[cmd] = [&, cmd] {
            return run_ucp_tower(args.file, args.horizon, args.cap, commons[cmd]);
        };
    }
    for (const std::string suite : {"kernel", "cp", "povm", "contraction", "bram", "tower"}) {
        CLI::App* cmd = make("fuzz-" + suite, "randomized property suite: " + suite);
        cmd->add_option("--seed", args.seed, "RNG seed (default 1729)");
        cmd->add_option("--trials", args.trials, "trial count (default 25)");
        actions[cmd] = [&, cmd, suite] {
            return run_fuzz(suite, args.seed, args.trials, commons[cmd]);
        };
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        for (const auto& [cmd, action] : actions)
            if (cmd->parsed()) return action();
        std::cerr << "no subcommand selected\n";
        return 2;
    } catch (const IoError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 2;
    } catch (const Json::exception& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
