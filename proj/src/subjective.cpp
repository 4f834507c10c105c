#include "saliqa/subjective.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "saliqa/csv.hpp"
#include "saliqa/errors.hpp"

namespace saliqa {

namespace {

// log-strength clamp for items whose MLE diverges (all wins or all losses)
constexpr double kLogClampBound = 30.0;

VoteOutcome parse_outcome(const std::string& s, const std::string& context) {
    if (s == "left") return VoteOutcome::left;
    if (s == "right") return VoteOutcome::right;
    if (s == "tie") return VoteOutcome::tie;
    throw SchemaError("bad outcome `" + s + "` " + context);
}

bool parse_flag(const std::string& s, const std::string& context) {
    if (s == "1" || s == "true") return true;
    if (s == "0" || s == "false" || s.empty()) return false;
    throw SchemaError("bad flag `" + s + "` " + context);
}

struct PairKey {
    int a, b;  // a < b
    bool operator<(const PairKey& o) const { return a != o.a ? a < o.a : b < o.b; }
};

}  // namespace

std::vector<VoteRecord> load_votes(const std::string& path) {
    auto rows = read_csv(path);
    const std::vector<std::string> expected = {"session_id", "left_id",         "right_id",
                                               "outcome",    "is_verification", "expected_outcome"};
    if (rows.empty()) throw SchemaError("empty votes CSV: " + path);
    for (std::size_t i = 0; i < expected.size(); ++i) {
        if (i >= rows[0].size() || rows[0][i] != expected[i])
            throw SchemaError("votes CSV missing column `" + expected[i] + "`: " + path);
    }
    std::vector<VoteRecord> votes;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const auto& row = rows[i];
        if (row.size() < 5) throw SchemaError("votes row " + std::to_string(i) + " too short: " + path);
        std::string context = "in row " + std::to_string(i) + " of " + path;
        VoteRecord v;
        v.session_id = row[0];
        v.left_id = row[1];
        v.right_id = row[2];
        if (v.left_id == v.right_id)
            throw ValidationError("vote compares an image to itself " + context);
        v.outcome = parse_outcome(row[3], context);
        v.is_verification = parse_flag(row[4], context);
        if (v.is_verification) {
            if (row.size() < 6 || row[5].empty())
                throw ValidationError("verification vote lacks expected_outcome " + context);
            v.expected_outcome = parse_outcome(row[5], context);
        }
        votes.push_back(std::move(v));
    }
    return votes;
}

void save_scores(const SubjectiveScores& scores, const std::string& path) {
    std::vector<std::vector<std::string>> rows;
    rows.push_back({"image_id", "score"});
    for (const auto& [id, score] : scores.scores)
        rows.push_back({id, format_csv_value(score)});
    write_csv(path, rows);
}

SessionFilterResult filter_sessions(const std::vector<VoteRecord>& votes) {
    std::set<std::string> bad_sessions;
    for (const auto& v : votes) {
        if (v.is_verification && v.expected_outcome && v.outcome != *v.expected_outcome)
            bad_sessions.insert(v.session_id);
    }
    SessionFilterResult result;
    result.rejected_sessions.assign(bad_sessions.begin(), bad_sessions.end());
    for (const auto& v : votes) {
        if (v.is_verification) continue;
        if (bad_sessions.count(v.session_id)) continue;
        result.kept.push_back(v);
    }
    return result;
}

SubjectiveScores bradley_terry(const std::vector<VoteRecord>& votes, double tol, int max_iter) {
    if (votes.empty()) throw ParameterError("bradley_terry needs at least one vote");
    if (!(tol > 0.0) || max_iter < 1) throw ParameterError("bad tolerance or iteration limit");

    std::vector<std::string> ids;
    std::map<std::string, int> index;
    for (const auto& v : votes) {
        for (const auto& id : {v.left_id, v.right_id}) {
            if (!index.count(id)) {
                index[id] = static_cast<int>(ids.size());
                ids.push_back(id);
            }
        }
    }
    const int n = static_cast<int>(ids.size());

    // effective win counts with ties split half/half
    std::map<PairKey, std::pair<double, double>> pair_wins;  // (wins of a, wins of b)
    for (const auto& v : votes) {
        int l = index[v.left_id], r = index[v.right_id];
        PairKey key{std::min(l, r), std::max(l, r)};
        auto& [wa, wb] = pair_wins[key];
        double left_win = v.outcome == VoteOutcome::left ? 1.0 : v.outcome == VoteOutcome::tie ? 0.5 : 0.0;
        double right_win = 1.0 - left_win;
        if (l == key.a) {
            wa += left_win;
            wb += right_win;
        } else {
            wa += right_win;
            wb += left_win;
        }
    }

    // connectivity over the comparison graph
    std::vector<int> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    std::function<int(int)> find = [&](int x) { return parent[x] == x ? x : parent[x] = find(parent[x]); };
    for (const auto& [key, wins] : pair_wins) parent[find(key.a)] = find(key.b);
    std::map<int, std::vector<std::string>> components;
    for (int i = 0; i < n; ++i) components[find(i)].push_back(ids[i]);
    if (components.size() > 1) {
        std::string msg = "comparison graph is disconnected; components:";
        for (const auto& [root, members] : components) {
            msg += " {";
            for (std::size_t i = 0; i < members.size() && i < 5; ++i)
                msg += (i ? "," : "") + members[i];
            if (members.size() > 5) msg += ",...";
            msg += "}";
        }
        throw GraphError(msg);
    }

    std::vector<double> total_wins(n, 0.0), total_losses(n, 0.0);
    for (const auto& [key, wins] : pair_wins) {
        total_wins[key.a] += wins.first;
        total_losses[key.a] += wins.second;
        total_wins[key.b] += wins.second;
        total_losses[key.b] += wins.first;
    }
    std::vector<bool> degenerate(n, false);
    for (int i = 0; i < n; ++i)
        if (total_wins[i] == 0.0 || total_losses[i] == 0.0) degenerate[i] = true;

    std::vector<double> logp(n, 0.0);
    auto log_likelihood = [&](const std::vector<double>& lp) {
        double ll = 0.0;
        for (const auto& [key, wins] : pair_wins) {
            double d = lp[key.a] - lp[key.b];
            // log(p_a/(p_a+p_b)) = -log1p(exp(-d))
            ll += wins.first * -std::log1p(std::exp(-d));
            ll += wins.second * -std::log1p(std::exp(d));
        }
        return ll;
    };

    SubjectiveScores result;
    bool converged = false;
    int it = 0;
    for (; it < max_iter && !converged; ++it) {
        // MM update: p_i <- W_i / sum_j n_ij / (p_i + p_j)
        std::vector<double> denom(n, 0.0);
        for (const auto& [key, wins] : pair_wins) {
            double nij = wins.first + wins.second;
            double inv = nij / (std::exp(logp[key.a]) + std::exp(logp[key.b]));
            denom[key.a] += inv;
            denom[key.b] += inv;
        }
        std::vector<double> next(n);
        for (int i = 0; i < n; ++i) {
            double p = total_wins[i] > 0.0 ? total_wins[i] / denom[i] : 0.0;
            next[i] = p > 0.0 ? std::log(p) : -kLogClampBound;
        }
        // gauge fix: zero-mean logs, then clamp divergent items
        double mean = std::accumulate(next.begin(), next.end(), 0.0) / n;
        double delta = 0.0;
        for (int i = 0; i < n; ++i) {
            next[i] = std::clamp(next[i] - mean, -kLogClampBound, kLogClampBound);
            delta = std::max(delta, std::abs(next[i] - logp[i]));
        }
        logp = std::move(next);
        result.log_likelihood_trace.push_back(log_likelihood(logp));
        converged = delta < tol;
    }

    result.iterations = it;
    result.converged = converged;
    for (int i = 0; i < n; ++i) {
        result.scores[ids[i]] = logp[i];
        if (degenerate[i]) result.clamped_ids.push_back(ids[i]);
    }
    std::sort(result.clamped_ids.begin(), result.clamped_ids.end());
    return result;
}

double bt_log_likelihood(const std::vector<VoteRecord>& votes,
                         const std::map<std::string, double>& log_scores) {
    double ll = 0.0;
    for (const auto& v : votes) {
        auto li = log_scores.find(v.left_id);
        auto ri = log_scores.find(v.right_id);
        if (li == log_scores.end() || ri == log_scores.end())
            throw ParameterError("vote references an unscored image: " + v.left_id + " vs " + v.right_id);
        double d = li->second - ri->second;
        double left_win = v.outcome == VoteOutcome::left ? 1.0 : v.outcome == VoteOutcome::tie ? 0.5 : 0.0;
        ll += left_win * -std::log1p(std::exp(-d));
        ll += (1.0 - left_win) * -std::log1p(std::exp(d));
    }
    return ll;
}

}  // namespace saliqa
