#pragma once

#include "dilkit/contraction.hpp"
#include "dilkit/kernel.hpp"
#include "dilkit/povm.hpp"
#include "dilkit/subnormal.hpp"
#include "dilkit/tower.hpp"

#include "json.hpp"

#include <optional>

namespace dilkit {

using Json = nlohmann::ordered_json;

/// Malformed input file or certificate; the message carries the field path.
class IoError : public Error {
public:
    explicit IoError(const std::string& what) : Error(what) {}
};

inline constexpr int kDocumentFormat = 1;

// ---- object <-> JSON -------------------------------------------------------
// Complex entries are encoded as [re, im] pairs; dimensions are explicit.

Json matrix_to_json(const ComplexMatrix& m);
ComplexMatrix matrix_from_json(const Json& j, const std::string& path);

Json map_to_json(const MatrixMap& m);
MatrixMap map_from_json(const Json& j, const std::string& path);

Json povm_to_json(const Povm& p);
Povm povm_from_json(const Json& j, const std::string& path);

Json kernel_to_json(const FiniteKernel& k);
FiniteKernel kernel_from_json(const Json& j, const std::string& path);

Json tuple_to_json(const CommutingTuple& t);
CommutingTuple tuple_from_json(const Json& j, const std::string& path);

Json tolerance_to_json(const Tolerance& t);
Tolerance tolerance_from_json(const Json& j, const std::string& path);

Json pair_to_json(const DilationPair& p);
DilationPair pair_from_json(const Json& j, const std::string& path);

// ---- documents -------------------------------------------------------------

/// One kind-tagged input document; exactly one payload is populated.
struct Document {
    std::string kind;
    std::optional<Tolerance> tolerance;
    std::optional<ComplexMatrix> matrix;
    std::optional<MatrixMap> map;
    std::optional<Povm> povm;
    std::optional<FiniteKernel> kernel;
    std::optional<CommutingTuple> tuple;
};

Document parse_document(const Json& j);
Document load_document(const std::string& file);

Json read_json_file(const std::string& file);
void save_json(const std::string& file, const Json& j);

// ---- certificates ----------------------------------------------------------
// Every constructive subcommand emits one of these; verify_certificate
// re-checks the construction contract from the stored data alone.

Json stinespring_certificate(const MatrixMap& phi, const DilationPair& pair);
Json naimark_certificate(const Povm& p, const NaimarkDilation& d);
Json halmos_certificate(const ComplexMatrix& a, const ComplexMatrix& u);
Json power_certificate(const ComplexMatrix& a, const PowerDilation& d);
Json embedding_certificate(const FeatureEmbedding& e);
Json tower_certificate(const DilationTower& t);
Json isometry_certificate(const FiniteKernel& source, const FiniteKernel& target,
                          const std::vector<std::size_t>& point_map, const ComplexMatrix& u);
Json match_certificate(const DilationPair& p1, const DilationPair& p2, const ComplexMatrix& w);

struct VerifyResult {
    bool ok = false;
    std::string kind;
    double max_residual = 0.0;
    std::vector<std::string> failures;
    explicit operator bool() const { return ok; }
};

/// Re-validates any certificate kind above. Unknown kinds raise IoError.
VerifyResult verify_certificate(const Json& cert, const Tolerance& tol);

/// Gram matrix reproduced from an embedding's feature columns:
/// entry (i, j) is inner(f_i, f_j).
ComplexMatrix embedding_gram(const ComplexMatrix& features);

}  // namespace dilkit
