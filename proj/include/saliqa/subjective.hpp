#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace saliqa {

enum class VoteOutcome { left, right, tie };

struct VoteRecord {
    std::string session_id;
    std::string left_id;
    std::string right_id;
    VoteOutcome outcome = VoteOutcome::tie;
    bool is_verification = false;
    std::optional<VoteOutcome> expected_outcome;  // present iff is_verification
};

struct SubjectiveScores {
    std::map<std::string, double> scores;  // zero-mean log strengths
    int iterations = 0;
    bool converged = false;
    std::vector<std::string> clamped_ids;       // items lacking an effective win or loss
    std::vector<double> log_likelihood_trace;   // one entry per MM iteration
};

struct SessionFilterResult {
    std::vector<VoteRecord> kept;               // non-verification votes of clean sessions
    std::vector<std::string> rejected_sessions;
};

// CSV header: session_id,left_id,right_id,outcome,is_verification,expected_outcome
std::vector<VoteRecord> load_votes(const std::string& path);
void save_scores(const SubjectiveScores& scores, const std::string& path);

// Drops every vote of any session that answered a verification pair wrong
// (a tie against a non-tie expectation counts as wrong).
SessionFilterResult filter_sessions(const std::vector<VoteRecord>& votes);

// Maximum-likelihood Bradley-Terry strengths via minorization-maximization.
// Ties are split as half a win for each side. Requires a connected
// comparison graph; items with no effective win or loss have their
// log-strength clamped and are listed in clamped_ids.
SubjectiveScores bradley_terry(const std::vector<VoteRecord>& votes, double tol = 1e-9,
                               int max_iter = 10000);

// Tie-split Bradley-Terry log-likelihood of a score assignment.
double bt_log_likelihood(const std::vector<VoteRecord>& votes,
                         const std::map<std::string, double>& log_scores);

}  // namespace saliqa
