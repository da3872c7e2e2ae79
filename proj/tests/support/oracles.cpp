#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>

namespace webeco::testing {

using graph::Category;

Edges random_digraph(std::size_t n, double density, std::mt19937_64& rng) {
    std::bernoulli_distribution coin(density);
    Edges edges;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (i != j && coin(rng)) edges.emplace_back(i, j);
        }
    }
    return edges;
}

std::vector<double> harmonic_floyd(std::size_t n, const Edges& edges, bool inbound) {
    constexpr double inf = std::numeric_limits<double>::infinity();
    std::vector<std::vector<double>> d(n, std::vector<double>(n, inf));
    for (std::size_t i = 0; i < n; ++i) d[i][i] = 0.0;
    for (auto [u, v] : edges) d[u][v] = 1.0;
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                if (d[i][k] + d[k][j] < d[i][j]) d[i][j] = d[i][k] + d[k][j];
    std::vector<double> h(n, 0.0);
    for (std::size_t v = 0; v < n; ++v) {
        for (std::size_t u = 0; u < n; ++u) {
            if (u == v) continue;
            const double dist = inbound ? d[u][v] : d[v][u];
            if (dist < inf) h[v] += 1.0 / dist;
        }
    }
    return h;
}

std::vector<double> pagerank_dense(std::size_t n, const Edges& edges, double damping) {
    const auto ni = static_cast<Eigen::Index>(n);
    Eigen::MatrixXd adj = Eigen::MatrixXd::Zero(ni, ni);
    for (auto [u, v] : edges) adj(static_cast<Eigen::Index>(v), static_cast<Eigen::Index>(u)) = 1.0;
    Eigen::MatrixXd m(ni, ni);
    for (Eigen::Index c = 0; c < ni; ++c) {
        const double deg = adj.col(c).sum();
        if (deg > 0) {
            m.col(c) = adj.col(c) / deg;
        } else {
            m.col(c).setConstant(1.0 / static_cast<double>(n));
        }
    }
    const Eigen::MatrixXd lhs = Eigen::MatrixXd::Identity(ni, ni) - damping * m;
    const Eigen::VectorXd rhs = Eigen::VectorXd::Constant(ni, (1.0 - damping) / static_cast<double>(n));
    Eigen::VectorXd r = lhs.fullPivLu().solve(rhs);
    r /= r.sum();
    return {r.data(), r.data() + r.size()};
}

HitsReference hits_eigen(std::size_t n, const Edges& edges) {
    const auto ni = static_cast<Eigen::Index>(n);
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(ni, ni);
    for (auto [u, v] : edges) a(static_cast<Eigen::Index>(u), static_cast<Eigen::Index>(v)) = 1.0;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(a.transpose() * a);
    const auto& values = solver.eigenvalues();  // ascending
    Eigen::VectorXd auth = solver.eigenvectors().col(ni - 1);
    if (auth.sum() < 0) auth = -auth;
    auth = auth.cwiseMax(0.0);
    auth.normalize();
    Eigen::VectorXd hub = a * auth;
    hub.normalize();
    HitsReference ref;
    ref.authority.assign(auth.data(), auth.data() + n);
    ref.hub.assign(hub.data(), hub.data() + n);
    ref.gap = n > 1 ? (values(ni - 1) - values(ni - 2)) / values(ni - 1) : 1.0;
    return ref;
}

std::vector<bool> bh_bruteforce(const std::vector<double>& p, double q) {
    const std::size_t m = p.size();
    std::vector<double> sorted = p;
    std::sort(sorted.begin(), sorted.end());
    double threshold = -1.0;
    for (std::size_t i = 1; i <= m; ++i) {
        if (sorted[i - 1] <= static_cast<double>(i) * q / static_cast<double>(m)) threshold = sorted[i - 1];
    }
    std::vector<bool> reject(m);
    for (std::size_t j = 0; j < m; ++j) reject[j] = p[j] <= threshold;
    return reject;
}

double mann_whitney_u_pairwise(const std::vector<double>& a, const std::vector<double>& b) {
    double u = 0.0;
    for (double x : a) {
        for (double y : b) u += x > y ? 1.0 : (x == y ? 0.5 : 0.0);
    }
    return u;
}

double mann_whitney_exact_p(const std::vector<double>& a, const std::vector<double>& b) {
    std::vector<double> pooled(a);
    pooled.insert(pooled.end(), b.begin(), b.end());
    const std::size_t n = pooled.size();
    const double centre = static_cast<double>(a.size() * b.size()) / 2.0;
    const double observed = std::abs(mann_whitney_u_pairwise(a, b) - centre);
    std::size_t total = 0, extreme = 0;
    for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
        if (static_cast<std::size_t>(__builtin_popcount(mask)) != a.size()) continue;
        std::vector<double> sa, sb;
        for (std::size_t i = 0; i < n; ++i) ((mask >> i) & 1u ? sa : sb).push_back(pooled[i]);
        ++total;
        if (std::abs(mann_whitney_u_pairwise(sa, sb) - centre) >= observed - 1e-9) ++extreme;
    }
    return static_cast<double>(extreme) / static_cast<double>(total);
}

std::set<std::string> RawCorpus::nodes() const {
    std::set<std::string> out;
    for (const auto& [d, l] : labels) out.insert(d);
    for (const auto& r : records) {
        if (r.source_domain == r.target_domain) continue;
        out.insert(r.source_domain);
        out.insert(r.target_domain);
    }
    return out;
}

graph::CategoryLabel RawCorpus::label(const std::string& domain) const {
    auto it = labels.find(domain);
    return it == labels.end() ? graph::CategoryLabel{} : it->second;
}

std::set<std::string> RawCorpus::members(const graph::Group& g) const {
    std::set<std::string> out;
    for (const auto& d : nodes()) {
        const auto l = label(d);
        const bool in = std::holds_alternative<Category>(g) ? l.category() == std::get<Category>(g)
                                                             : l.subcategory() == std::get<graph::Subcategory>(g);
        if (in) out.insert(d);
    }
    return out;
}

std::set<std::string> RawCorpus::out(const std::string& domain) const {
    std::set<std::string> o;
    for (const auto& r : records) {
        if (r.source_domain == domain && r.target_domain != domain) o.insert(r.target_domain);
    }
    return o;
}

std::optional<double> RawCorpus::shared_outlink_pct(const graph::Group& a, const graph::Group& b,
                                                    bool exclude) const {
    std::set<std::string> out_a, out_b;
    const auto ma = members(a), mb = members(b);
    for (const auto& d : ma) {
        auto o = out(d);
        out_a.insert(o.begin(), o.end());
    }
    for (const auto& d : mb) {
        auto o = out(d);
        out_b.insert(o.begin(), o.end());
    }
    if (out_a.empty() || out_b.empty()) return std::nullopt;
    if (exclude) {
        for (const auto* m : {&ma, &mb}) {
            for (const auto& d : *m) {
                out_a.erase(d);
                out_b.erase(d);
            }
        }
    }
    if (out_a.empty()) return std::nullopt;
    std::size_t shared = 0;
    for (const auto& d : out_a) shared += out_b.count(d);
    return 100.0 * static_cast<double>(shared) / static_cast<double>(out_a.size());
}

std::optional<double> RawCorpus::overlap_similarity(const std::string& domain,
                                                    const std::vector<std::string>& reference,
                                                    std::size_t min_connections) const {
    const auto o = out(domain);
    if (o.empty() || o.size() < min_connections) return std::nullopt;
    std::set<std::string> ref;
    for (const auto& r : reference) {
        auto ro = out(r);
        ref.insert(ro.begin(), ro.end());
    }
    std::size_t shared = 0;
    for (const auto& d : o) shared += ref.count(d);
    return static_cast<double>(shared) / static_cast<double>(o.size());
}

std::vector<analytics::Candidate> RawCorpus::discover(const std::vector<std::string>& seeds, std::size_t k,
                                                      std::size_t min_connections) const {
    std::vector<analytics::Candidate> all;
    for (const auto& d : nodes()) {
        if (std::find(seeds.begin(), seeds.end(), d) != seeds.end()) continue;
        if (auto s = overlap_similarity(d, seeds, min_connections)) all.push_back({d, *s});
    }
    // Selection by repeated maximum rather than sorting.
    std::vector<analytics::Candidate> picked;
    while (picked.size() < k && !all.empty()) {
        auto best = all.begin();
        for (auto it = all.begin(); it != all.end(); ++it) {
            if (it->similarity > best->similarity ||
                (it->similarity == best->similarity && it->domain < best->domain)) {
                best = it;
            }
        }
        picked.push_back(*best);
        all.erase(best);
    }
    return picked;
}

bool RawCorpus::conspiracy_oriented(const std::string& domain) const {
    std::set<std::string> con, auth, nonnews;
    for (const auto& r : records) {
        if (r.target_domain != domain || r.source_domain == domain) continue;
        switch (label(r.source_domain).category()) {
            case Category::Conspiracy: con.insert(r.source_domain); break;
            case Category::Authentic: auth.insert(r.source_domain); break;
            case Category::NonNews: nonnews.insert(r.source_domain); break;
            default: break;
        }
    }
    return con.size() > auth.size() && con.size() > nonnews.size();
}

std::vector<analytics::TrendPoint> RawCorpus::trend(const graph::Group& sources,
                                                    analytics::Granularity granularity, bool pooled) const {
    const auto src = members(sources);
    std::set<std::string> oriented;
    for (const auto& d : nodes()) {
        if (conspiracy_oriented(d)) oriented.insert(d);
    }
    // period key -> source -> (hits, total)
    std::map<std::string, std::map<std::string, std::pair<double, double>>> tally;
    std::map<std::string, Date> starts;
    for (const auto& r : records) {
        if (!r.publication_date || r.source_domain == r.target_domain || !src.count(r.source_domain)) continue;
        const Date d = *r.publication_date;
        char key[16];
        Date start = d;
        if (granularity == analytics::Granularity::Year) {
            std::snprintf(key, sizeof key, "%04d", d.year());
            start = Date::from_ymd(d.year(), 1, 1);
        } else if (granularity == analytics::Granularity::Month) {
            std::snprintf(key, sizeof key, "%04d-%02u", d.year(), d.month());
            start = Date::from_ymd(d.year(), d.month(), 1);
        } else {
            std::snprintf(key, sizeof key, "%04d-%02u-%02u", d.year(), d.month(), d.day());
        }
        auto& t = tally[key][r.source_domain];
        t.second += 1.0;
        if (oriented.count(r.target_domain)) t.first += 1.0;
        starts[key] = start;
    }
    std::vector<analytics::TrendPoint> out;
    for (const auto& [key, per_source] : tally) {
        double value = 0.0;
        if (pooled) {
            double h = 0.0, t = 0.0;
            for (const auto& [s, ht] : per_source) {
                h += ht.first;
                t += ht.second;
            }
            value = 100.0 * h / t;
        } else {
            for (const auto& [s, ht] : per_source) value += 100.0 * ht.first / ht.second;
            value /= static_cast<double>(per_source.size());
        }
        out.push_back({key, starts[key], value, per_source.size()});
    }
    return out;
}

std::vector<analytics::LinkedDomain> RawCorpus::top_linked(const graph::Group& from, const graph::Group& to,
                                                           std::size_t k) const {
    const auto f = members(from), t = members(to);
    std::map<std::string, std::set<std::pair<std::string, std::string>>> pairs;
    for (const auto& r : records) {
        if (r.source_domain == r.target_domain) continue;
        if (f.count(r.source_domain) && t.count(r.target_domain)) {
            pairs[r.target_domain].insert({r.source_url, r.target_url});
        }
    }
    std::vector<analytics::LinkedDomain> rows;
    for (const auto& [d, s] : pairs) rows.push_back({d, s.size()});
    std::vector<analytics::LinkedDomain> picked;
    while ((k == 0 || picked.size() < k) && !rows.empty()) {
        auto best = rows.begin();
        for (auto it = rows.begin(); it != rows.end(); ++it) {
            if (it->unique_urls > best->unique_urls ||
                (it->unique_urls == best->unique_urls && it->domain < best->domain)) {
                best = it;
            }
        }
        picked.push_back(*best);
        rows.erase(best);
    }
    return picked;
}

RawCorpus random_corpus(std::size_t max_domains, std::mt19937_64& rng) {
    std::uniform_int_distribution<std::size_t> n_dist(2, max_domains);
    const std::size_t n = n_dist(rng);
    std::vector<std::string> domains;
    for (std::size_t i = 0; i < n; ++i) domains.push_back("site" + std::to_string(i) + ".com");

    RawCorpus c;
    std::uniform_int_distribution<int> cat(0, 5);
    std::uniform_int_distribution<int> sub(0, 4);
    for (const auto& d : domains) {
        const int x = cat(rng);
        if (x == 0 || x == 4) {
            c.labels[d] = graph::CategoryLabel(Category::Conspiracy, graph::kAllSubcategories[sub(rng)]);
        } else if (x <= 3) {
            c.labels[d] = graph::CategoryLabel(graph::kAllCategories[x]);
        }
    }
    std::uniform_int_distribution<std::size_t> pick(0, n - 1);
    std::uniform_int_distribution<int> n_records(0, 40);
    std::uniform_int_distribution<int> page(0, 3);
    std::uniform_int_distribution<int> day(0, 800);
    std::bernoulli_distribution dated(0.8);
    const int m = n_records(rng);
    for (int i = 0; i < m; ++i) {
        ingest::LinkRecord r;
        r.source_domain = domains[pick(rng)];
        r.target_domain = domains[pick(rng)];
        r.source_url = "https://" + r.source_domain + "/p" + std::to_string(page(rng));
        r.target_url = "https://" + r.target_domain + "/q" + std::to_string(page(rng));
        if (dated(rng)) r.publication_date = Date::from_ymd(2019, 1, 1).plus_days(day(rng));
        c.records.push_back(r);
    }
    return c;
}

Eigen::MatrixXd simulate_var(const std::vector<Eigen::MatrixXd>& lags, const Eigen::VectorXd& intercept, double sd,
                             std::size_t n, std::mt19937_64& rng, std::size_t burn_in) {
    const Eigen::Index k = intercept.size();
    const std::size_t p = lags.size();
    const std::size_t total = n + burn_in + p;
    std::normal_distribution<double> noise(0.0, sd);
    Eigen::MatrixXd y = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(total), k);
    for (std::size_t t = p; t < total; ++t) {
        Eigen::VectorXd v = intercept;
        for (std::size_t i = 1; i <= p; ++i) v += lags[i - 1] * y.row(static_cast<Eigen::Index>(t - i)).transpose();
        for (Eigen::Index j = 0; j < k; ++j) v(j) += noise(rng);
        y.row(static_cast<Eigen::Index>(t)) = v.transpose();
    }
    return y.bottomRows(static_cast<Eigen::Index>(n));
}

std::vector<double> white_noise(std::size_t n, std::mt19937_64& rng, double sd) {
    std::normal_distribution<double> noise(0.0, sd);
    std::vector<double> out(n);
    for (auto& v : out) v = noise(rng);
    return out;
}

std::vector<double> random_walk(std::size_t n, std::mt19937_64& rng) {
    auto out = white_noise(n, rng);
    for (std::size_t i = 1; i < n; ++i) out[i] += out[i - 1];
    return out;
}

std::vector<double> column(const Eigen::MatrixXd& m, Eigen::Index c) {
    std::vector<double> out(static_cast<std::size_t>(m.rows()));
    for (Eigen::Index r = 0; r < m.rows(); ++r) out[static_cast<std::size_t>(r)] = m(r, c);
    return out;
}

std::vector<scoring::FringeSample> fringe_clusters(std::size_t per_class, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> mis_p(0.5, 1.0), mis_c(30.0, 60.0);
    std::uniform_real_distribution<double> auth_p(-1.0, 0.1), auth_c(0.0, 10.0);
    std::vector<scoring::FringeSample> out;
    for (std::size_t i = 0; i < per_class; ++i) {
        out.push_back({"m" + std::to_string(i) + ".com", mis_p(rng), mis_c(rng), scoring::FringeLabel::Misinformation});
        out.push_back({"a" + std::to_string(i) + ".com", auth_p(rng), auth_c(rng), scoring::FringeLabel::Authentic});
    }
    return out;
}

}  // namespace webeco::testing
