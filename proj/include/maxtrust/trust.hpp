#pragma once

// Trust matrices from interaction ledgers, Eigentrust, and MaxTrust.

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "maxtrust/conventional.hpp"
#include "maxtrust/graph.hpp"
#include "maxtrust/tropical.hpp"

namespace maxtrust {

// s(i, j) = satisfactory minus unsatisfactory interactions of i with j.
// Pairs with known(i, j) == false carry no information.
class InteractionLedger {
public:
    InteractionLedger() = default;
    explicit InteractionLedger(std::size_t n) : n_(n), s_(n * n, 0), known_(n * n, 0) {}

    std::size_t size() const { return n_; }
    long long s(std::size_t i, std::size_t j) const { return s_[i * n_ + j]; }
    bool known(std::size_t i, std::size_t j) const { return known_[i * n_ + j] != 0; }

    void set(std::size_t i, std::size_t j, long long value);
    void record(std::size_t i, std::size_t j, bool satisfactory);
    void forget(std::size_t i, std::size_t j);

    friend bool operator==(const InteractionLedger&, const InteractionLedger&) = default;

private:
    std::size_t n_ = 0;
    std::vector<long long> s_;
    std::vector<char> known_;
};

// Ledger file: "n" on the first line, then one "i j s" triple per known pair.
InteractionLedger read_ledger(std::istream& in);
InteractionLedger parse_ledger(const std::string& text);
void write_ledger(std::ostream& out, const InteractionLedger& ledger);
InteractionLedger load_ledger(const std::string& path);

// Real-valued local scores with the same known/unknown split as a ledger.
// The simulator's direct trust levels live here.
struct LocalScores {
    std::size_t n = 0;
    std::vector<double> s;     // row-major n x n
    std::vector<char> known;   // row-major n x n

    LocalScores() = default;
    explicit LocalScores(std::size_t size) : n(size), s(size * size, 0.0), known(size * size, 0) {}
    explicit LocalScores(const InteractionLedger& ledger);

    double& at(std::size_t i, std::size_t j) { return s[i * n + j]; }
    double at(std::size_t i, std::size_t j) const { return s[i * n + j]; }
    bool is_known(std::size_t i, std::size_t j) const { return known[i * n + j] != 0; }
};

struct TrustMatrix {
    RealMatrix conventional;
    TropicalMatrix tropical;
};

// c_ij = max(s_ij, 0) / sum_k max(s_ik, 0) over known pairs. The tropical
// grid keeps c_ij on known pairs and eps elsewhere. A row with no positive
// score becomes uniform 1/n conventionally and all-eps tropically.
TrustMatrix normalize_local_trust(const InteractionLedger& ledger);
TrustMatrix normalize_local_trust(const LocalScores& scores);

struct EigentrustOptions {
    double epsilon = 1e-6;
    std::size_t max_iters = 10000;
};

struct EigentrustResult {
    std::vector<double> t;
    std::size_t iterations = 0;
    // Exactly one closed class and it is aperiodic: the limit then does not
    // depend on the start vector.
    bool dominant = false;
    std::size_t closed_class_count = 0;
    std::size_t period = 0;  // of the closed class when there is exactly one
};

// t <- C^T t, renormalized to unit 1-norm, until ||t' - t||_1 < epsilon.
// Throws NonConvergence carrying the last two iterates at max_iters.
EigentrustResult eigentrust(const RealMatrix& c, std::span<const double> r, const EigentrustOptions& opts = {});

// Exact k-step iterate of t(k+1) = D (x) t(k) from t(0) = w.
TropicalVector recurrence_oracle(const TropicalMatrix& d, std::span<const Tropical> w, unsigned k);

// xi_i = lambda_i (+) (+)_{j in H(i)} xi_j, back to front, where H(i) holds
// the later blocks j whose coupling block (i, j) is not all eps.
std::vector<double> growth_rates(const NormalForm& nf, std::span<const Tropical> block_lambdas);

enum class VectorRule {
    // v_j is the limit of t_j(k) - k xi_j of the block recurrence.
    Asymptotic,
    // v_j = (D (x) w)_j (x) lambda_j^(j-1), divided by xi_j when the own
    // block does not dominate the next one; the last block from max_power.
    AsWritten,
    // As above without the lambda_j^(j-1) factor.
    AsWrittenNoExponent,
};

std::string to_string(VectorRule rule);
VectorRule parse_vector_rule(const std::string& name);

struct MaxTrustOptions {
    VectorRule rule = VectorRule::Asymptotic;
    double tie_tol = 1e-9;
};

struct BlockDiagnostics {
    BlockRange range;                 // positions in the normal form of D
    std::vector<std::size_t> agents;  // original agent ids
    Tropical lambda = eps;
    double xi = 0.0;
    bool own_rate = false;  // lambda >= xi: the block's own cycles set its growth
    std::size_t power_iterations = 0;
    std::size_t cyclicity = 0;
};

struct MaxTrustSolution {
    NormalForm nf;                 // of D = C^T
    std::vector<double> xi;        // per block
    std::vector<double> agent_xi;  // per agent
    TropicalVector v;              // per agent
    unsigned T = 0;
    TropicalVector t;  // v (x) xi^T per agent
    std::vector<BlockDiagnostics> blocks;
};

// Agents whose tropical row or column is all eps; MaxTrust needs none.
std::vector<std::size_t> irregular_agents(const TropicalMatrix& c);

MaxTrustSolution maxtrust(const TropicalMatrix& c, std::span<const Tropical> w, unsigned T,
                          const MaxTrustOptions& opts = {});

// Rank of each entry by descending value, 1-based; ties go to the lower
// index. eps ranks below every finite value.
std::vector<std::size_t> ranking(std::span<const double> values);
std::vector<std::size_t> ranking(std::span<const Tropical> values);

// CSV with header "agent_id,value,rank".
void write_trust_csv(std::ostream& out, std::span<const double> values);
void write_trust_csv(std::ostream& out, std::span<const Tropical> values);

}  // namespace maxtrust
