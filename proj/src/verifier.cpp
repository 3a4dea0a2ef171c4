#include "abc/verifier.hpp"

#include <algorithm>
#include <cmath>

#include "abc/optim.hpp"
#include "json.hpp"

namespace abc {

namespace {

std::size_t word_index(const std::vector<std::size_t>& word, std::size_t base) {
    std::size_t idx = 0;
    for (std::size_t s : word) idx = idx * base + s;
    return idx;
}

void check_budget(const BlockCode& code, const ChannelPair& ch) {
    std::size_t ny_n = pow_sz(ch.ny(), code.n), nz_n = pow_sz(ch.nz(), code.n);
    std::size_t support = 0;
    for (double e : code.encoder.w)
        if (e > 0.0) ++support;
    // full sum over (k,l) x X^n-support x Y^n x Z^n
    if (support > kEnumBudget / std::max<std::size_t>(1, ny_n * nz_n))
        throw ValidationError("enumeration budget exceeded");
    if (support * ny_n * nz_n > kEnumBudget) throw ValidationError("enumeration budget exceeded");
}

void check_decoders(const BlockCode& code, const ChannelPair& ch) {
    std::size_t ny_n = pow_sz(ch.ny(), code.n), nz_n = pow_sz(ch.nz(), code.n);
    if (code.dec1.size() != ny_n || code.dec2.size() != nz_n)
        throw ValidationError("decoder table size mismatch");
    for (std::size_t v : code.dec1)
        if (v >= static_cast<std::size_t>(code.K * code.L)) throw ValidationError("dec1 out of range");
    for (std::size_t v : code.dec2)
        if (v >= static_cast<std::size_t>(code.L)) throw ValidationError("dec2 out of range");
}

// A(kl, xn) = W1^n(D1(k,l) | xn), B(l, xn) = W2^n(D2(l) | xn)
struct DecodeSums {
    std::vector<double> a;  // (K*L) x nx^n
    std::vector<double> b;  // L x nx^n
};

DecodeSums decode_sums(const BlockCode& code, const std::vector<double>& w1n,
                       const std::vector<double>& w2n, std::size_t nx_n, std::size_t ny_n,
                       std::size_t nz_n) {
    DecodeSums s;
    s.a.assign(static_cast<std::size_t>(code.K * code.L) * nx_n, 0.0);
    s.b.assign(static_cast<std::size_t>(code.L) * nx_n, 0.0);
    for (std::size_t xn = 0; xn < nx_n; ++xn) {
        for (std::size_t yn = 0; yn < ny_n; ++yn) s.a[code.dec1[yn] * nx_n + xn] += w1n[xn * ny_n + yn];
        for (std::size_t zn = 0; zn < nz_n; ++zn) s.b[code.dec2[zn] * nx_n + xn] += w2n[xn * nz_n + zn];
    }
    return s;
}

double correct_probability(const BlockCode& code, const DecodeSums& s, std::size_t nx_n) {
    double acc = 0.0;
    for (int k = 0; k < code.K; ++k)
        for (int l = 0; l < code.L; ++l) {
            std::size_t kl = code.row(k, l);
            for (std::size_t xn = 0; xn < nx_n; ++xn) {
                double e = code.encoder(kl, xn);
                if (e > 0.0) acc += e * s.a[kl * nx_n + xn] * s.b[static_cast<std::size_t>(l) * nx_n + xn];
            }
        }
    return acc / (static_cast<double>(code.K) * code.L);
}

std::vector<double> p_zn_given_l(const BlockCode& code, const std::vector<double>& w2n,
                                 std::size_t nx_n, std::size_t nz_n) {
    std::vector<double> p(static_cast<std::size_t>(code.L) * nz_n, 0.0);
    for (int k = 0; k < code.K; ++k)
        for (int l = 0; l < code.L; ++l) {
            std::size_t kl = code.row(k, l);
            for (std::size_t xn = 0; xn < nx_n; ++xn) {
                double e = code.encoder(kl, xn);
                if (e == 0.0) continue;
                for (std::size_t zn = 0; zn < nz_n; ++zn)
                    p[static_cast<std::size_t>(l) * nz_n + zn] += e * w2n[xn * nz_n + zn] / code.K;
            }
        }
    return p;
}

}  // namespace

std::size_t pow_sz(std::size_t base, int exp) {
    std::size_t r = 1;
    for (int i = 0; i < exp; ++i) r *= base;
    return r;
}

std::vector<double> product_channel(const StochasticMatrix& w, int n) {
    std::size_t nin = pow_sz(w.in_size, n), nout = pow_sz(w.out_size, n);
    std::vector<double> out(nin * nout, 1.0);
    for (std::size_t x = 0; x < nin; ++x)
        for (std::size_t y = 0; y < nout; ++y) {
            std::size_t xd = x, yd = y;
            double v = 1.0;
            for (int t = 0; t < n; ++t) {
                v *= w(xd % w.in_size, yd % w.out_size);
                xd /= w.in_size;
                yd /= w.out_size;
            }
            out[x * nout + y] = v;
        }
    return out;
}

BlockCode make_deterministic_code(int n, int K, int L,
                                  const std::vector<std::vector<std::size_t>>& codewords,
                                  const ChannelPair& ch) {
    if (n < 1 || K < 1 || L < 1) throw ValidationError("code: n, K, L must be positive");
    if (codewords.size() != static_cast<std::size_t>(K * L))
        throw ValidationError("code: expected K*L codewords");
    std::size_t nx_n = pow_sz(ch.nx(), n);
    BlockCode code;
    code.n = n;
    code.K = K;
    code.L = L;
    code.nx = ch.nx();
    std::vector<double> enc(static_cast<std::size_t>(K * L) * nx_n, 0.0);
    for (std::size_t kl = 0; kl < codewords.size(); ++kl) {
        const auto& word = codewords[kl];
        if (word.size() != static_cast<std::size_t>(n)) throw ValidationError("code: wrong word length");
        for (std::size_t s : word)
            if (s >= ch.nx()) throw ValidationError("code: symbol outside input alphabet");
        enc[kl * nx_n + word_index(word, ch.nx())] = 1.0;
    }
    code.encoder = StochasticMatrix(static_cast<std::size_t>(K * L), nx_n, std::move(enc));
    code.dec1.assign(pow_sz(ch.ny(), n), 0);
    code.dec2.assign(pow_sz(ch.nz(), n), 0);
    return code;
}

BlockCode parse_code_spec(const std::string& text, const ChannelPair& ch) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ValidationError(std::string("code spec: ") + e.what());
    }
    for (const char* key : {"n", "K", "L", "encoder"})
        if (!j.contains(key)) throw ValidationError(std::string("code spec: missing key ") + key);
    int n = j["n"].get<int>(), K = j["K"].get<int>(), L = j["L"].get<int>();
    std::vector<std::vector<std::size_t>> words;
    for (const auto& w : j["encoder"]) words.push_back(w.get<std::vector<std::size_t>>());
    BlockCode code = make_deterministic_code(n, K, L, words, ch);
    if (j.contains("dec1")) {
        const auto& d = j["dec1"];
        if (d.size() != code.dec1.size()) throw ValidationError("code spec: dec1 size mismatch");
        for (std::size_t i = 0; i < code.dec1.size(); ++i) {
            auto pair = d[i].get<std::vector<int>>();
            if (pair.size() != 2 || pair[0] < 0 || pair[0] >= K || pair[1] < 0 || pair[1] >= L)
                throw ValidationError("code spec: dec1 entry out of range");
            code.dec1[i] = code.row(pair[0], pair[1]);
        }
    }
    if (j.contains("dec2")) {
        const auto& d = j["dec2"];
        if (d.size() != code.dec2.size()) throw ValidationError("code spec: dec2 size mismatch");
        for (std::size_t i = 0; i < code.dec2.size(); ++i) {
            int l = d[i].get<int>();
            if (l < 0 || l >= L) throw ValidationError("code spec: dec2 entry out of range");
            code.dec2[i] = static_cast<std::size_t>(l);
        }
    }
    check_decoders(code, ch);
    return code;
}

double exact_correct_probability(const BlockCode& code, const ChannelPair& ch) {
    check_budget(code, ch);
    check_decoders(code, ch);
    std::size_t nx_n = pow_sz(ch.nx(), code.n);
    std::size_t ny_n = pow_sz(ch.ny(), code.n), nz_n = pow_sz(ch.nz(), code.n);
    auto w1n = product_channel(ch.w1, code.n);
    auto w2n = product_channel(ch.w2, code.n);
    DecodeSums s = decode_sums(code, w1n, w2n, nx_n, ny_n, nz_n);
    return correct_probability(code, s, nx_n);
}

std::array<double, 3> error_probabilities(const BlockCode& code, const ChannelPair& ch) {
    check_budget(code, ch);
    check_decoders(code, ch);
    std::size_t nx_n = pow_sz(ch.nx(), code.n);
    std::size_t ny_n = pow_sz(ch.ny(), code.n), nz_n = pow_sz(ch.nz(), code.n);
    auto w1n = product_channel(ch.w1, code.n);
    auto w2n = product_channel(ch.w2, code.n);
    DecodeSums s = decode_sums(code, w1n, w2n, nx_n, ny_n, nz_n);
    double pc = correct_probability(code, s, nx_n);
    double c1 = 0.0, c2 = 0.0;
    for (int k = 0; k < code.K; ++k)
        for (int l = 0; l < code.L; ++l) {
            std::size_t kl = code.row(k, l);
            for (std::size_t xn = 0; xn < nx_n; ++xn) {
                double e = code.encoder(kl, xn);
                if (e == 0.0) continue;
                c1 += e * s.a[kl * nx_n + xn];
                c2 += e * s.b[static_cast<std::size_t>(l) * nx_n + xn];
            }
        }
    double norm = static_cast<double>(code.K) * code.L;
    return {1.0 - pc, 1.0 - c1 / norm, 1.0 - c2 / norm};
}

BlockCode optimize_decoders(const BlockCode& code, const ChannelPair& ch, int rounds) {
    check_budget(code, ch);
    check_decoders(code, ch);
    std::size_t nx_n = pow_sz(ch.nx(), code.n);
    std::size_t ny_n = pow_sz(ch.ny(), code.n), nz_n = pow_sz(ch.nz(), code.n);
    auto w1n = product_channel(ch.w1, code.n);
    auto w2n = product_channel(ch.w2, code.n);

    BlockCode cur = code;
    DecodeSums s = decode_sums(cur, w1n, w2n, nx_n, ny_n, nz_n);
    double pc = correct_probability(cur, s, nx_n);
    for (int r = 0; r < rounds; ++r) {
        bool changed = false;

        // dec1(y^n): best (k,l) given dec2
        for (std::size_t yn = 0; yn < ny_n; ++yn) {
            std::size_t best = cur.dec1[yn];
            double best_score = -1.0;
            for (int k = 0; k < cur.K; ++k)
                for (int l = 0; l < cur.L; ++l) {
                    std::size_t kl = cur.row(k, l);
                    double score = 0.0;
                    for (std::size_t xn = 0; xn < nx_n; ++xn) {
                        double e = cur.encoder(kl, xn);
                        if (e > 0.0)
                            score += e * w1n[xn * ny_n + yn] * s.b[static_cast<std::size_t>(l) * nx_n + xn];
                    }
                    if (score > best_score) {
                        best_score = score;
                        best = kl;
                    }
                }
            if (best != cur.dec1[yn]) {
                cur.dec1[yn] = best;
                changed = true;
            }
        }
        s = decode_sums(cur, w1n, w2n, nx_n, ny_n, nz_n);
        double pc1 = correct_probability(cur, s, nx_n);
        if (pc1 < pc - 1e-12) throw ValidationError("optimize_decoders: P_c decreased");
        pc = pc1;

        // dec2(z^n): best l given dec1
        for (std::size_t zn = 0; zn < nz_n; ++zn) {
            std::size_t best = cur.dec2[zn];
            double best_score = -1.0;
            for (int l = 0; l < cur.L; ++l) {
                double score = 0.0;
                for (int k = 0; k < cur.K; ++k) {
                    std::size_t kl = cur.row(k, l);
                    for (std::size_t xn = 0; xn < nx_n; ++xn) {
                        double e = cur.encoder(kl, xn);
                        if (e > 0.0) score += e * s.a[kl * nx_n + xn] * w2n[xn * nz_n + zn];
                    }
                }
                if (score > best_score) {
                    best_score = score;
                    best = static_cast<std::size_t>(l);
                }
            }
            if (best != cur.dec2[zn]) {
                cur.dec2[zn] = best;
                changed = true;
            }
        }
        s = decode_sums(cur, w1n, w2n, nx_n, ny_n, nz_n);
        double pc2 = correct_probability(cur, s, nx_n);
        if (pc2 < pc - 1e-12) throw ValidationError("optimize_decoders: P_c decreased");
        pc = pc2;

        if (!changed) break;
    }
    return cur;
}

BoundReport check_theorem3_bound(const BlockCode& code, const ChannelPair& ch,
                                 const ExponentParams& ep, const OmegaResult& omega) {
    BoundReport rep;
    rep.label = "theorem3";
    rep.p_c = exact_correct_probability(code, ch);
    double f = exponent_at_params(code.r1(), code.r2(), ep, omega);
    rep.bound = 6.0 * std::exp(-static_cast<double>(code.n) * f);
    rep.slack = rep.bound - rep.p_c;
    rep.pass = rep.slack >= -1e-12;
    return rep;
}

Lemma1Q lemma1_induced_q(const BlockCode& code, const ChannelPair& ch) {
    std::size_t nx_n = pow_sz(ch.nx(), code.n);
    std::size_t ny_n = pow_sz(ch.ny(), code.n), nz_n = pow_sz(ch.nz(), code.n);
    auto w1n = product_channel(ch.w1, code.n);
    auto w2n = product_channel(ch.w2, code.n);
    std::size_t L = static_cast<std::size_t>(code.L);

    Lemma1Q q;
    // Y^n is conditionally independent of (Z^n, L) given X^n, so the induced
    // conditionals collapse to the product channels.
    q.qi.assign(nx_n * nz_n * L * ny_n, 0.0);
    for (std::size_t xn = 0; xn < nx_n; ++xn)
        for (std::size_t zn = 0; zn < nz_n; ++zn)
            for (std::size_t l = 0; l < L; ++l)
                for (std::size_t yn = 0; yn < ny_n; ++yn)
                    q.qi[((xn * nz_n + zn) * L + l) * ny_n + yn] = w1n[xn * ny_n + yn];
    q.qii.assign(nx_n * ny_n * L * nz_n, 0.0);
    for (std::size_t xn = 0; xn < nx_n; ++xn)
        for (std::size_t yn = 0; yn < ny_n; ++yn)
            for (std::size_t l = 0; l < L; ++l)
                for (std::size_t zn = 0; zn < nz_n; ++zn)
                    q.qii[((xn * ny_n + yn) * L + l) * nz_n + zn] = w2n[xn * nz_n + zn];

    q.qiii.assign(L * ny_n, 0.0);
    for (int k = 0; k < code.K; ++k)
        for (int l = 0; l < code.L; ++l) {
            std::size_t kl = code.row(k, l);
            for (std::size_t xn = 0; xn < nx_n; ++xn) {
                double e = code.encoder(kl, xn);
                if (e == 0.0) continue;
                for (std::size_t yn = 0; yn < ny_n; ++yn)
                    q.qiii[static_cast<std::size_t>(l) * ny_n + yn] += e * w1n[xn * ny_n + yn] / code.K;
            }
        }

    auto pzl = p_zn_given_l(code, w2n, nx_n, nz_n);
    q.qiv.assign(nz_n, 0.0);
    for (std::size_t l = 0; l < L; ++l)
        for (std::size_t zn = 0; zn < nz_n; ++zn) q.qiv[zn] += pzl[l * nz_n + zn] / code.L;
    q.qv.assign(ny_n, 0.0);
    for (std::size_t l = 0; l < L; ++l)
        for (std::size_t yn = 0; yn < ny_n; ++yn) q.qv[yn] += q.qiii[l * ny_n + yn] / code.L;
    return q;
}

Lemma1Q lemma1_random_q(const BlockCode& code, const ChannelPair& ch, std::uint64_t seed) {
    std::size_t nx_n = pow_sz(ch.nx(), code.n);
    std::size_t ny_n = pow_sz(ch.ny(), code.n), nz_n = pow_sz(ch.nz(), code.n);
    std::size_t L = static_cast<std::size_t>(code.L);

    Lemma1Q q;
    std::uint64_t ctr = seed * 0x9e3779b97f4a7c15ULL;
    auto fill_rows = [&ctr](std::vector<double>& dst, std::size_t rows, std::size_t cols) {
        dst.resize(rows * cols);
        for (std::size_t r = 0; r < rows; ++r) {
            auto row = random_simplex_point({cols}, ++ctr);
            std::copy(row.begin(), row.end(), dst.begin() + static_cast<long>(r * cols));
        }
    };
    fill_rows(q.qi, nx_n * nz_n * L, ny_n);
    fill_rows(q.qii, nx_n * ny_n * L, nz_n);
    fill_rows(q.qiii, L, ny_n);
    fill_rows(q.qiv, 1, nz_n);
    fill_rows(q.qv, 1, ny_n);
    return q;
}

BoundReport check_lemma1_bound(const BlockCode& code, const ChannelPair& ch, const Lemma1Q& qs,
                               double eta) {
    if (!(eta > 0.0)) throw ValidationError("check_lemma1_bound: eta must be positive");
    check_budget(code, ch);
    check_decoders(code, ch);
    std::size_t nx_n = pow_sz(ch.nx(), code.n);
    std::size_t ny_n = pow_sz(ch.ny(), code.n), nz_n = pow_sz(ch.nz(), code.n);
    std::size_t L = static_cast<std::size_t>(code.L);
    if (qs.qi.size() != nx_n * nz_n * L * ny_n || qs.qii.size() != nx_n * ny_n * L * nz_n ||
        qs.qiii.size() != L * ny_n || qs.qiv.size() != nz_n || qs.qv.size() != ny_n)
        throw ValidationError("check_lemma1_bound: Q dimension mismatch");

    auto w1n = product_channel(ch.w1, code.n);
    auto w2n = product_channel(ch.w2, code.n);
    auto pzl = p_zn_given_l(code, w2n, nx_n, nz_n);

    const double slack_exp = std::exp(-static_cast<double>(code.n) * eta);
    const double kf = static_cast<double>(code.K), lf = static_cast<double>(code.L);

    double p_event = 0.0;
    for (int k = 0; k < code.K; ++k)
        for (int l = 0; l < code.L; ++l) {
            std::size_t kl = code.row(k, l);
            std::size_t lu = static_cast<std::size_t>(l);
            for (std::size_t xn = 0; xn < nx_n; ++xn) {
                double e = code.encoder(kl, xn);
                if (e == 0.0) continue;
                for (std::size_t yn = 0; yn < ny_n; ++yn) {
                    double w1 = w1n[xn * ny_n + yn];
                    if (w1 == 0.0) continue;
                    // y-only conditions hoisted out of the z loop
                    if (w1 < qs.qiii[lu * ny_n + yn] * kf * slack_exp) continue;         // (10)
                    if (w1 < qs.qv[yn] * kf * lf * slack_exp) continue;                  // (12)
                    for (std::size_t zn = 0; zn < nz_n; ++zn) {
                        double w2 = w2n[xn * nz_n + zn];
                        if (w2 == 0.0) continue;
                        if (w1 < slack_exp * qs.qi[((xn * nz_n + zn) * L + lu) * ny_n + yn]) continue;  // (8)
                        if (w2 < slack_exp * qs.qii[((xn * ny_n + yn) * L + lu) * nz_n + zn]) continue; // (9)
                        if (pzl[lu * nz_n + zn] < qs.qiv[zn] * lf * slack_exp) continue;                // (11)
                        p_event += e * w1 * w2 / (kf * lf);
                    }
                }
            }
        }

    BoundReport rep;
    rep.label = "lemma1";
    rep.p_c = exact_correct_probability(code, ch);
    rep.bound = p_event + 5.0 * slack_exp;
    rep.slack = rep.bound - rep.p_c;
    rep.pass = rep.slack >= -1e-12;
    return rep;
}

}  // namespace abc
