#pragma once
// Specialization machinery: admissible t streams from the window data, quadratic
// fields from f(t), explicit 3-torsion ideal classes as forms, per-field rank
// certificates, and the enumeration harness with a JSONL certificate store.

#include "rank3/descent.hpp"
#include "rank3/qform.hpp"

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace rank3 {

struct CandidateT {
    Rat t;
    Int height;
};

// CRT-combine the finite windows into t = t0 + M*k and stream all window-admissible
// t with height <= B (denominator-cleared), filtered by the real interval. When no
// finite window constrains the stream (M = 1) it continues past the integers through
// every rational of height <= B in the interval, by increasing denominator.
class AdmissibleStream {
  public:
    AdmissibleStream(const std::vector<PAdicWindow>& windows, const Int& B);
    std::optional<CandidateT> next();

    const Int& modulus() const { return M_; }
    const Int& base() const { return t0_; }
    long cursor() const { return emitted_; }
    void seek(long n);  // fast-forward to the n-th candidate (resume support)

  private:
    void numerator_range();
    Int t0_, M_, B_;
    Rat lo_, hi_;
    bool empty_ = false;
    Int d_ = 1;               // current denominator (stays 1 when M > 1)
    long m_ = 0;              // outward spiral index within the current denominator
    long emitted_ = 0;
    Int jlo_ = 0, jhi_ = -1;  // inclusive numerator/step range (empty when jlo > jhi)
};

struct FieldData {
    Rat t;
    Rat m;                 // f(t)
    Rat s;                 // square part: m = s^2 * w
    Int w;                 // squarefree part (certified-squarefree portion when level = order)
    Int D;                 // fundamental discriminant of Q(sqrt(w)) (order disc when level = order)
    std::string level;     // "field" | "order"
    FactoredInteger evidence;
};

// Evaluate and factor f(t); skip (nullopt) when f(t) = 0 or a rational square.
std::optional<FieldData> field_from_t(const CurveFixture& fx, const Rat& t,
                                      const std::vector<Int>& hints = {},
                                      const FactorBudget& budget = {});

// Form representing the class of the cube root of (y_t - Y_i(t)) in Cl(D).
// Self-check (cube principal) enforced; failures and undefined cases -> nullopt.
std::optional<QuadForm> ideal_class_from_point(const CurveFixture& fx, int i,
                                               const FieldData& fd,
                                               const std::vector<Int>& hints = {},
                                               const FactorBudget& budget = {});

// All self-check-passing classes for the point (up to two, from the 2-adic branch
// ambiguity); every entry cubes to a principal form.
std::vector<QuadForm> ideal_class_candidates(const CurveFixture& fx, int i,
                                             const FieldData& fd,
                                             const std::vector<Int>& hints = {},
                                             const FactorBudget& budget = {});

struct RankCertificate {
    std::string fixture;
    Rat t;
    Rat m;
    Int D;
    std::string level;
    std::vector<QuadForm> forms;
    std::vector<int> point_indices;
    int rank = 0;
    std::vector<std::string> transcript;
    std::string timestamp;

    std::string to_json() const;
    static RankCertificate from_json(const std::string& line);
};

// Re-run every check recorded in a certificate from its serialized content alone.
bool reverify_certificate(const RankCertificate& cert);

// Build forms for all fixture points at t, drop self-check failures, certify the
// maximal independent subset. nullopt when nothing certifiable.
std::optional<RankCertificate> certify_field(const CurveFixture& fx, const Rat& t,
                                             const std::vector<Int>& hints = {},
                                             const FactorBudget& budget = {},
                                             std::string* skip_reason = nullptr);

struct EnumerationSummary {
    long candidates = 0;
    long certified = 0;
    long skipped = 0;
    std::map<int, long> fields_per_rank;  // rank -> distinct D count (at least rank)
    std::vector<RankCertificate> fresh;   // appended this run
    std::vector<std::string> notes;       // skip reasons, order-level near-misses
};

// Iterate the stream to height B, dedup by discriminant, append to the JSONL store.
EnumerationSummary enumeration_harness(const CurveFixture& fx, const Int& B,
                                       const std::string& store_path,
                                       const std::vector<Int>& hints = {},
                                       const FactorBudget& budget = {},
                                       double wall_seconds = 0 /* 0 = no limit */,
                                       int min_rank_to_store = 1);

// Windows used for a fixture's stream: one window per odd prime of the exceptional
// set up to a cap, plus the real window.
std::vector<PAdicWindow> fixture_windows(const CurveFixture& fx, int i = 0,
                                         const Int& prime_cap = Int(100));

}  // namespace rank3
