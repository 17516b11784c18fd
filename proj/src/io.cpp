#include "dilkit/io.hpp"

#include <cmath>
#include <fstream>

namespace dilkit {

namespace {

const Json& field(const Json& j, const std::string& name, const std::string& path) {
    if (!j.is_object()) throw IoError(path + ": expected an object");
    auto it = j.find(name);
    if (it == j.end()) throw IoError(path + ": missing field '" + name + "'");
    return *it;
}

std::size_t size_field(const Json& j, const std::string& name, const std::string& path) {
    const Json& f = field(j, name, path);
    if (!f.is_number_integer() || f.get<long long>() < 0)
        throw IoError(path + "." + name + ": expected a nonnegative integer");
    return f.get<std::size_t>();
}

Complex complex_from_json(const Json& j, const std::string& path) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
        throw IoError(path + ": complex entries are [re, im] pairs");
    return Complex(j[0].get<double>(), j[1].get<double>());
}

Json complex_to_json(Complex z) { return Json::array({z.real(), z.imag()}); }

}  // namespace

Json matrix_to_json(const ComplexMatrix& m) {
    Json data = Json::array();
    for (const Complex& z : m.entries()) data.push_back(complex_to_json(z));
    return Json{{"rows", m.rows()}, {"cols", m.cols()}, {"data", std::move(data)}};
}

ComplexMatrix matrix_from_json(const Json& j, const std::string& path) {
    const std::size_t rows = size_field(j, "rows", path);
    const std::size_t cols = size_field(j, "cols", path);
    const Json& data = field(j, "data", path);
    if (!data.is_array() || data.size() != rows * cols)
        throw IoError(path + ".data: expected " + std::to_string(rows * cols) +
                      " row-major entries");
    std::vector<Complex> entries;
    entries.reserve(rows * cols);
    for (std::size_t i = 0; i < data.size(); ++i)
        entries.push_back(complex_from_json(data[i], path + ".data[" + std::to_string(i) + "]"));
    try {
        return ComplexMatrix(rows, cols, std::move(entries));
    } catch (const Error& e) {
        throw IoError(path + ": " + e.what());
    }
}

Json map_to_json(const MatrixMap& m) {
    Json images = Json::array();
    for (const auto& img : m.images()) images.push_back(matrix_to_json(img));
    return Json{{"d", m.d()}, {"n", m.n()}, {"images", std::move(images)}};
}

MatrixMap map_from_json(const Json& j, const std::string& path) {
    const std::size_t d = size_field(j, "d", path);
    const std::size_t n = size_field(j, "n", path);
    const Json& images = field(j, "images", path);
    if (!images.is_array() || images.size() != d * d)
        throw IoError(path + ".images: expected d^2 = " + std::to_string(d * d) + " matrices");
    std::vector<ComplexMatrix> mats;
    for (std::size_t i = 0; i < images.size(); ++i)
        mats.push_back(matrix_from_json(images[i], path + ".images[" + std::to_string(i) + "]"));
    try {
        return MatrixMap(d, n, std::move(mats));
    } catch (const Error& e) {
        throw IoError(path + ": " + e.what());
    }
}

Json povm_to_json(const Povm& p) {
    Json effects = Json::array();
    for (const auto& e : p.effects) effects.push_back(matrix_to_json(e));
    return Json{{"n", p.n}, {"effects", std::move(effects)}};
}

Povm povm_from_json(const Json& j, const std::string& path) {
    Povm p;
    p.n = size_field(j, "n", path);
    const Json& effects = field(j, "effects", path);
    if (!effects.is_array() || effects.empty())
        throw IoError(path + ".effects: expected a nonempty array");
    for (std::size_t i = 0; i < effects.size(); ++i)
        p.effects.push_back(
            matrix_from_json(effects[i], path + ".effects[" + std::to_string(i) + "]"));
    return p;
}

Json kernel_to_json(const FiniteKernel& k) {
    return Json{{"points", k.points}, {"gram", matrix_to_json(k.gram)}};
}

FiniteKernel kernel_from_json(const Json& j, const std::string& path) {
    FiniteKernel k;
    const Json& points = field(j, "points", path);
    if (!points.is_array()) throw IoError(path + ".points: expected an array of labels");
    for (const auto& p : points) {
        if (!p.is_string()) throw IoError(path + ".points: labels must be strings");
        k.points.push_back(p.get<std::string>());
    }
    k.gram = matrix_from_json(field(j, "gram", path), path + ".gram");
    return k;
}

Json tuple_to_json(const CommutingTuple& t) {
    Json mats = Json::array();
    for (const auto& m : t.mats) mats.push_back(matrix_to_json(m));
    return Json{{"mats", std::move(mats)}};
}

CommutingTuple tuple_from_json(const Json& j, const std::string& path) {
    CommutingTuple t;
    const Json& mats = field(j, "mats", path);
    if (!mats.is_array() || mats.empty())
        throw IoError(path + ".mats: expected a nonempty array");
    for (std::size_t i = 0; i < mats.size(); ++i)
        t.mats.push_back(matrix_from_json(mats[i], path + ".mats[" + std::to_string(i) + "]"));
    return t;
}

Json tolerance_to_json(const Tolerance& t) {
    return Json{{"eq_tol", t.eq_tol}, {"psd_tol", t.psd_tol}, {"rank_tol", t.rank_tol}};
}

Tolerance tolerance_from_json(const Json& j, const std::string& path) {
    if (!j.is_object()) throw IoError(path + ": expected an object");
    Tolerance t;
    if (j.contains("eq_tol")) t.eq_tol = j["eq_tol"].get<double>();
    if (j.contains("psd_tol")) t.psd_tol = j["psd_tol"].get<double>();
    if (j.contains("rank_tol")) t.rank_tol = j["rank_tol"].get<double>();
    try {
        t.validate();
    } catch (const Error& e) {
        throw IoError(path + ": " + e.what());
    }
    return t;
}

Json pair_to_json(const DilationPair& p) {
    Json images = Json::array();
    for (const auto& img : p.rep_images) images.push_back(matrix_to_json(img));
    return Json{{"d", p.d},
                {"n", p.n},
                {"K_dim", p.K_dim},
                {"V", matrix_to_json(p.V)},
                {"rep_images", std::move(images)}};
}

DilationPair pair_from_json(const Json& j, const std::string& path) {
    DilationPair p;
    p.d = size_field(j, "d", path);
    p.n = size_field(j, "n", path);
    p.K_dim = size_field(j, "K_dim", path);
    p.V = matrix_from_json(field(j, "V", path), path + ".V");
    const Json& images = field(j, "rep_images", path);
    if (!images.is_array() || images.size() != p.d * p.d)
        throw IoError(path + ".rep_images: expected d^2 matrices");
    for (std::size_t i = 0; i < images.size(); ++i)
        p.rep_images.push_back(
            matrix_from_json(images[i], path + ".rep_images[" + std::to_string(i) + "]"));
    return p;
}

Document parse_document(const Json& j) {
    if (!j.is_object()) throw IoError("document: expected a JSON object");
    if (!j.contains("format") || !j["format"].is_number_integer() ||
        j["format"].get<int>() != kDocumentFormat)
        throw IoError("document.format: expected the integer " +
                      std::to_string(kDocumentFormat));
    const Json& kind = field(j, "kind", "document");
    if (!kind.is_string()) throw IoError("document.kind: expected a string");

    Document doc;
    doc.kind = kind.get<std::string>();
    if (j.contains("tolerance"))
        doc.tolerance = tolerance_from_json(j["tolerance"], "document.tolerance");

    if (doc.kind == "matrix")
        doc.matrix = matrix_from_json(field(j, "matrix", "document"), "document.matrix");
    else if (doc.kind == "map")
        doc.map = map_from_json(field(j, "map", "document"), "document.map");
    else if (doc.kind == "povm")
        doc.povm = povm_from_json(field(j, "povm", "document"), "document.povm");
    else if (doc.kind == "kernel")
        doc.kernel = kernel_from_json(field(j, "kernel", "document"), "document.kernel");
    else if (doc.kind == "tuple")
        doc.tuple = tuple_from_json(field(j, "tuple", "document"), "document.tuple");
    else
        throw IoError("document.kind: unknown kind '" + doc.kind +
                      "' (expected matrix|map|povm|kernel|tuple)");
    return doc;
}

Json read_json_file(const std::string& file) {
    std::ifstream in(file);
    if (!in) throw IoError("cannot open '" + file + "'");
    Json j;
    try {
        j = Json::parse(in);
    } catch (const Json::parse_error& e) {
        throw IoError(file + ": " + e.what());
    }
    return j;
}

Document load_document(const std::string& file) {
    try {
        return parse_document(read_json_file(file));
    } catch (const IoError& e) {
        throw IoError(file + ": " + e.what());
    }
}

void save_json(const std::string& file, const Json& j) {
    std::ofstream out(file);
    if (!out) throw IoError("cannot write '" + file + "'");
    out << j.dump(2) << "\n";
}

// ---- certificates ----------------------------------------------------------

namespace {

Json certificate_header(const std::string& kind) {
    return Json{{"format", kDocumentFormat}, {"kind", kind}};
}

}  // namespace

Json stinespring_certificate(const MatrixMap& phi, const DilationPair& pair) {
    Json j = certificate_header("stinespring-certificate");
    j["map"] = map_to_json(phi);
    j["pair"] = pair_to_json(pair);
    return j;
}

Json naimark_certificate(const Povm& p, const NaimarkDilation& d) {
    Json j = certificate_header("naimark-certificate");
    j["povm"] = povm_to_json(p);
    Json projections = Json::array();
    for (const auto& q : d.projections) projections.push_back(matrix_to_json(q));
    j["dilation"] = Json{{"K_dim", d.K_dim},
                         {"V", matrix_to_json(d.V)},
                         {"projections", std::move(projections)}};
    return j;
}

Json halmos_certificate(const ComplexMatrix& a, const ComplexMatrix& u) {
    Json j = certificate_header("halmos-certificate");
    j["contraction"] = matrix_to_json(a);
    j["unitary"] = matrix_to_json(u);
    return j;
}

Json power_certificate(const ComplexMatrix& a, const PowerDilation& d) {
    Json j = certificate_header("power-dilation-certificate");
    j["contraction"] = matrix_to_json(a);
    j["horizon"] = d.horizon;
    j["unitary"] = matrix_to_json(d.U);
    return j;
}

Json embedding_certificate(const FeatureEmbedding& e) {
    Json j = certificate_header("embedding-certificate");
    j["kernel"] = kernel_to_json(e.kernel);
    j["dim"] = e.dim;
    j["features"] = matrix_to_json(e.features);
    return j;
}

Json tower_certificate(const DilationTower& t) {
    Json j = certificate_header("tower-certificate");
    j["map"] = map_to_json(t.map.phi);
    j["horizon"] = t.horizon;
    j["E_dim"] = t.E_dim;
    j["V"] = matrix_to_json(t.V);
    return j;
}

Json isometry_certificate(const FiniteKernel& source, const FiniteKernel& target,
                          const std::vector<std::size_t>& point_map, const ComplexMatrix& u) {
    Json j = certificate_header("isometry-certificate");
    j["source"] = kernel_to_json(source);
    j["target"] = kernel_to_json(target);
    j["point_map"] = point_map;
    j["isometry"] = matrix_to_json(u);
    return j;
}

Json match_certificate(const DilationPair& p1, const DilationPair& p2, const ComplexMatrix& w) {
    Json j = certificate_header("match-certificate");
    j["pair1"] = pair_to_json(p1);
    j["pair2"] = pair_to_json(p2);
    j["unitary"] = matrix_to_json(w);
    return j;
}

ComplexMatrix embedding_gram(const ComplexMatrix& features) {
    return transpose(adjoint(features) * features);
}

namespace {

struct Checker {
    const Tolerance& tol;
    VerifyResult result;

    void check(const std::string& label, double residual, double scale = 1.0) {
        result.max_residual = std::max(result.max_residual, residual);
        if (residual > 100.0 * tol.eq_tol * (1.0 + scale))
            result.failures.push_back(label + " residual " + std::to_string(residual));
    }
    void fail(const std::string& label) { result.failures.push_back(label); }
    VerifyResult finish() {
        result.ok = result.failures.empty();
        return result;
    }
};

VerifyResult verify_stinespring(const Json& cert, const Tolerance& tol) {
    MatrixMap phi = map_from_json(cert.at("map"), "certificate.map");
    DilationPair pair = pair_from_json(cert.at("pair"), "certificate.pair");
    Checker c{tol, {false, "stinespring-certificate", 0.0, {}}};
    if (pair.d != phi.d() || pair.n != phi.n()) {
        c.fail("pair and map sizes disagree");
        return c.finish();
    }
    PairResiduals r = pair_residuals(pair);
    c.check("representation star law", r.star);
    c.check("representation multiplicativity", r.multiplicativity);
    c.check("representation unit", r.unit);
    c.check("norm identity", r.norm_identity, std::pow(operator_norm(pair.V), 2.0));
    MatrixMap compressed = pair.compression();
    double dilation = 0.0;
    for (std::size_t i = 0; i < phi.images().size(); ++i)
        dilation = std::max(dilation, max_abs_diff(compressed.images()[i], phi.images()[i]));
    c.check("dilation identity", dilation, max_abs(phi.choi()));
    return c.finish();
}

VerifyResult verify_naimark_cert(const Json& cert, const Tolerance& tol) {
    Povm p = povm_from_json(cert.at("povm"), "certificate.povm");
    const Json& dj = cert.at("dilation");
    NaimarkDilation d;
    d.K_dim = dj.at("K_dim").get<std::size_t>();
    d.V = matrix_from_json(dj.at("V"), "certificate.dilation.V");
    for (std::size_t i = 0; i < dj.at("projections").size(); ++i)
        d.projections.push_back(matrix_from_json(dj.at("projections")[i],
                                                 "certificate.dilation.projections"));
    Checker c{tol, {false, "naimark-certificate", 0.0, {}}};
    PovmVerdict pv = validate_povm(p, tol);
    if (!pv.valid) c.fail("stored POVM is invalid");
    NaimarkReport report = verify_naimark(p, d, tol);
    c.check("compression identity", report.compression_residual);
    c.check("isometry", report.isometry_residual);
    c.check("spectral measure laws", report.pvm_residual);
    return c.finish();
}

VerifyResult verify_halmos(const Json& cert, const Tolerance& tol) {
    ComplexMatrix a = matrix_from_json(cert.at("contraction"), "certificate.contraction");
    ComplexMatrix u = matrix_from_json(cert.at("unitary"), "certificate.unitary");
    Checker c{tol, {false, "halmos-certificate", 0.0, {}}};
    const std::size_t n = a.rows();
    if (u.rows() != 2 * n || u.cols() != 2 * n) {
        c.fail("unitary is not 2n x 2n");
        return c.finish();
    }
    if (operator_norm(a) > 1.0 + tol.eq_tol) c.fail("stored matrix is not a contraction");
    c.check("unitarity", max_abs_diff(adjoint(u) * u, ComplexMatrix::identity(2 * n)));
    c.check("corner", max_abs_diff(get_block(u, 0, 0, n, n), a));
    return c.finish();
}

VerifyResult verify_power(const Json& cert, const Tolerance& tol) {
    ComplexMatrix a = matrix_from_json(cert.at("contraction"), "certificate.contraction");
    const std::size_t horizon = cert.at("horizon").get<std::size_t>();
    ComplexMatrix u = matrix_from_json(cert.at("unitary"), "certificate.unitary");
    Checker c{tol, {false, "power-dilation-certificate", 0.0, {}}};
    const std::size_t n = a.rows();
    if (horizon < 1 || u.rows() != (horizon + 1) * n || !u.is_square()) {
        c.fail("unitary size does not match the horizon");
        return c.finish();
    }
    if (operator_norm(a) > 1.0 + tol.eq_tol) c.fail("stored matrix is not a contraction");
    c.check("unitarity", max_abs_diff(adjoint(u) * u, ComplexMatrix::identity(u.rows())));
    PowerDilation d{horizon, n, u};
    for (std::size_t m = 0; m <= horizon; ++m)
        c.check("compression at power " + std::to_string(m),
                max_abs_diff(power_compression(d, m), matrix_power(a, m)));
    return c.finish();
}

VerifyResult verify_embedding(const Json& cert, const Tolerance& tol) {
    FiniteKernel k = kernel_from_json(cert.at("kernel"), "certificate.kernel");
    const std::size_t dim = cert.at("dim").get<std::size_t>();
    ComplexMatrix features = matrix_from_json(cert.at("features"), "certificate.features");
    Checker c{tol, {false, "embedding-certificate", 0.0, {}}};
    if (features.rows() != dim || features.cols() != k.points.size()) {
        c.fail("feature matrix shape does not match");
        return c.finish();
    }
    c.check("gram reproduction", max_abs_diff(embedding_gram(features), k.gram),
            max_abs(k.gram));
    if (numerical_rank(features, tol) != dim) c.fail("embedding is not minimal");
    return c.finish();
}

VerifyResult verify_tower(const Json& cert, const Tolerance& tol) {
    MatrixMap phi = map_from_json(cert.at("map"), "certificate.map");
    const std::size_t horizon = cert.at("horizon").get<std::size_t>();
    ComplexMatrix v = matrix_from_json(cert.at("V"), "certificate.V");
    Checker c{tol, {false, "tower-certificate", 0.0, {}}};
    try {
        UcpMap u = make_ucp(phi, tol);
        // re-verify at whatever size the certificate claims, within reason
        const std::size_t n = std::max<std::size_t>(phi.n(), 1);
        const double required =
            static_cast<double>(n) *
            std::pow(static_cast<double>(v.rows()) / static_cast<double>(n),
                     static_cast<double>(horizon));
        if (!(required <= 2e5)) {
            c.fail("stored tower dimension too large to re-verify");
            return c.finish();
        }
        const std::size_t cap = std::max<std::size_t>(4096, static_cast<std::size_t>(required) + 1);
        DilationTower t = tower_from_isometry(u, v, horizon, tol, cap);
        ProjectionLadder ladder = projection_ladder(t, tol);
        double worst_gap = 0.0;
        for (double gap : ladder.gap_min_eigenvalues) worst_gap = std::min(worst_gap, gap);
        c.check("ladder monotonicity", std::max(0.0, -worst_gap));
        double step = 0.0;
        for (std::size_t p = 0; p < u.dim(); ++p)
            for (std::size_t q = 0; q < u.dim(); ++q) {
                ComplexMatrix unit(u.dim(), u.dim());
                unit(p, q) = 1.0;
                step = std::max(step, max_abs_diff(tower_moment(t, 1, unit), phi.apply(unit)));
            }
        c.check("per-step compression", step);
    } catch (const Error& e) {
        c.fail(e.what());
    }
    return c.finish();
}

VerifyResult verify_isometry(const Json& cert, const Tolerance& tol) {
    FiniteKernel source = kernel_from_json(cert.at("source"), "certificate.source");
    FiniteKernel target = kernel_from_json(cert.at("target"), "certificate.target");
    std::vector<std::size_t> point_map =
        cert.at("point_map").get<std::vector<std::size_t>>();
    ComplexMatrix u = matrix_from_json(cert.at("isometry"), "certificate.isometry");
    Checker c{tol, {false, "isometry-certificate", 0.0, {}}};
    try {
        FeatureEmbedding e1 = build_embedding(source, tol);
        FeatureEmbedding e2 = build_embedding(target, tol);
        if (u.rows() != e2.dim || u.cols() != e1.dim) {
            c.fail("isometry shape does not match the canonical embeddings");
            return c.finish();
        }
        c.check("isometry law",
                max_abs_diff(adjoint(u) * u, ComplexMatrix::identity(e1.dim)));
        ComplexMatrix mapped(e2.dim, e1.features.cols());
        for (std::size_t j = 0; j < point_map.size(); ++j)
            set_column(mapped, j, get_column(e2.features, point_map[j]));
        c.check("feature intertwining", max_abs_diff(u * e1.features, mapped),
                max_abs(e1.features));
    } catch (const Error& e) {
        c.fail(e.what());
    }
    return c.finish();
}

VerifyResult verify_match(const Json& cert, const Tolerance& tol) {
    DilationPair p1 = pair_from_json(cert.at("pair1"), "certificate.pair1");
    DilationPair p2 = pair_from_json(cert.at("pair2"), "certificate.pair2");
    ComplexMatrix w = matrix_from_json(cert.at("unitary"), "certificate.unitary");
    Checker c{tol, {false, "match-certificate", 0.0, {}}};
    if (w.rows() != p2.K_dim || w.cols() != p1.K_dim) {
        c.fail("matching unitary has the wrong shape");
        return c.finish();
    }
    c.check("unitarity", max_abs_diff(adjoint(w) * w, ComplexMatrix::identity(p1.K_dim)));
    c.check("linking operator", max_abs_diff(w * p1.V, p2.V), max_abs(p1.V));
    double intertwining = 0.0;
    for (std::size_t p = 0; p < p1.d; ++p)
        for (std::size_t q = 0; q < p1.d; ++q)
            intertwining = std::max(
                intertwining, max_abs_diff(w * p1.rep(p, q), p2.rep(p, q) * w));
    c.check("representation intertwining", intertwining);
    return c.finish();
}

}  // namespace

VerifyResult verify_certificate(const Json& cert, const Tolerance& tol) {
    if (!cert.is_object() || !cert.contains("kind") || !cert["kind"].is_string())
        throw IoError("certificate: missing kind tag");
    const std::string kind = cert["kind"].get<std::string>();
    try {
        if (kind == "stinespring-certificate") return verify_stinespring(cert, tol);
        if (kind == "naimark-certificate") return verify_naimark_cert(cert, tol);
        if (kind == "halmos-certificate") return verify_halmos(cert, tol);
        if (kind == "power-dilation-certificate") return verify_power(cert, tol);
        if (kind == "embedding-certificate") return verify_embedding(cert, tol);
        if (kind == "tower-certificate") return verify_tower(cert, tol);
        if (kind == "isometry-certificate") return verify_isometry(cert, tol);
        if (kind == "match-certificate") return verify_match(cert, tol);
    } catch (const Json::exception& e) {
        throw IoError(std::string("certificate: ") + e.what());
    }
    throw IoError("certificate: unknown kind '" + kind + "'");
}

}  // namespace dilkit
