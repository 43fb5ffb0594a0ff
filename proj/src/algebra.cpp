#include "galilei/algebra.hpp"

#include <algorithm>
#include <random>
#include <sstream>

namespace galilei {

namespace {

std::string coefficient_prefix(const Series& s) {
    if (s.is_one()) return "";
    if (s.size() == 1) {
        auto str = s.to_string();
        if (str == "-1") return "-";
        return str + " ";
    }
    return "(" + s.to_string() + ") ";
}

std::string join_terms(const std::vector<std::string>& parts) {
    if (parts.empty()) return "0";
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        const auto& p = parts[i];
        if (i == 0) {
            out += p;
        } else if (!p.empty() && p[0] == '-') {
            out += " - " + p.substr(1);
        } else {
            out += " + " + p;
        }
    }
    return out;
}

}  // namespace

std::string generator_name(Generator g, bool dual) {
    static const char* upper[] = {"K", "H", "P", "M"};
    static const char* lower[] = {"k", "h", "p", "m"};
    return dual ? lower[index_of(g)] : upper[index_of(g)];
}

// ---------------------------------------------------------------- Monomial

Monomial Monomial::of(Generator g, int power) {
    Monomial m;
    m.e[index_of(g)] = static_cast<std::uint8_t>(power);
    return m;
}

std::vector<Generator> Monomial::letters() const {
    std::vector<Generator> w;
    for (auto g : kGenerators)
        for (int i = 0; i < e[index_of(g)]; ++i) w.push_back(g);
    return w;
}

std::string Monomial::to_string(bool dual) const {
    if (is_identity()) return "1";
    std::string out;
    for (auto g : kGenerators) {
        int k = e[index_of(g)];
        if (k == 0) continue;
        if (!out.empty()) out += ' ';
        out += generator_name(g, dual);
        if (k > 1) out += "^" + std::to_string(k);
    }
    return out;
}

bool operator<(const Monomial& a, const Monomial& b) {
    int da = a.degree(), db = b.degree();
    if (da != db) return da < db;
    for (int i = 0; i < 4; ++i)
        if (a.e[i] != b.e[i]) return a.e[i] > b.e[i];
    return false;
}

// ---------------------------------------------------------------- AlgebraElement

AlgebraElement AlgebraElement::scalar(const Series& s) { return term(Monomial::identity(), s); }

AlgebraElement AlgebraElement::scalar(const Rational& c, int order) { return scalar(Series(c, order)); }

AlgebraElement AlgebraElement::generator(Generator g, int order) {
    return term(Monomial::of(g), Series(Rational(1), order));
}

AlgebraElement AlgebraElement::term(const Monomial& m, const Series& s) {
    AlgebraElement a(s.order());
    a.add_term(m, s);
    return a;
}

Series AlgebraElement::coefficient(const Monomial& m) const {
    auto it = terms_.find(m);
    return it == terms_.end() ? Series(order_) : it->second;
}

void AlgebraElement::add_term(const Monomial& m, const Series& s) {
    if (s.order() != order_) throw OrderMismatchError("algebra element and coefficient orders differ");
    if (s.is_zero()) return;
    auto [it, inserted] = terms_.try_emplace(m, s);
    if (!inserted) {
        it->second += s;
        if (it->second.is_zero()) terms_.erase(it);
    }
}

int AlgebraElement::max_degree() const {
    int d = 0;
    for (const auto& [m, s] : terms_) d = std::max(d, m.degree());
    return d;
}

std::optional<int> AlgebraElement::lowest_order() const {
    std::optional<int> low;
    for (const auto& [m, s] : terms_) {
        auto d = s.lowest_degree();
        if (d && (!low || *d < *low)) low = d;
    }
    return low;
}

AlgebraElement AlgebraElement::operator-() const {
    AlgebraElement r(*this);
    for (auto& [m, s] : r.terms_) s = -s;
    return r;
}

AlgebraElement& AlgebraElement::operator+=(const AlgebraElement& o) {
    if (o.order_ != order_) throw OrderMismatchError("algebra element orders differ");
    for (const auto& [m, s] : o.terms_) add_term(m, s);
    return *this;
}

AlgebraElement& AlgebraElement::operator-=(const AlgebraElement& o) {
    if (o.order_ != order_) throw OrderMismatchError("algebra element orders differ");
    for (const auto& [m, s] : o.terms_) add_term(m, -s);
    return *this;
}

AlgebraElement& AlgebraElement::operator*=(const Series& s) {
    return *this = map_coefficients([&](const Series& c) { return c * s; });
}

AlgebraElement& AlgebraElement::operator*=(const Rational& c) {
    return *this = map_coefficients([&](const Series& s) { return s * c; });
}

AlgebraElement AlgebraElement::map_coefficients(const std::function<Series(const Series&)>& f) const {
    AlgebraElement r(order_);
    for (const auto& [m, s] : terms_) r.add_term(m, f(s));
    return r;
}

AlgebraElement AlgebraElement::substitute(ParameterId p, const Series& value) const {
    return map_coefficients([&](const Series& s) { return s.substitute(p, value); });
}

AlgebraElement AlgebraElement::homogeneous_part(int d) const {
    return map_coefficients([&](const Series& s) { return s.homogeneous_part(d); });
}

AlgebraElement AlgebraElement::undeformed() const {
    return map_coefficients([&](const Series& s) { return Series(s.constant_term(), s.order()); });
}

std::string AlgebraElement::to_string(bool dual) const {
    std::vector<std::string> parts;
    for (const auto& [m, s] : terms_) {
        if (m.is_identity())
            parts.push_back(s.size() == 1 ? s.to_string() : "(" + s.to_string() + ")");
        else
            parts.push_back(coefficient_prefix(s) + m.to_string(dual));
    }
    return join_terms(parts);
}

// ---------------------------------------------------------------- CommutationTable

CommutationTable::CommutationTable(std::string name, int order, std::array<AlgebraElement, 6> brackets,
                                   int degree_cap, bool dual_names)
    : name_(std::move(name)),
      order_(order),
      brackets_(std::move(brackets)),
      degree_cap_(degree_cap),
      dual_names_(dual_names),
      cache_(std::make_shared<Cache>()) {
    for (const auto& b : brackets_)
        if (b.order() != order_) throw OrderMismatchError("bracket truncation order differs from table order");
}

int CommutationTable::pair_index(Generator a, Generator b) {
    int i = index_of(a), j = index_of(b);
    if (i >= j) throw std::invalid_argument("pair_index requires a < b");
    // (K,H) (K,P) (K,M) (H,P) (H,M) (P,M)
    static const int table[4][4] = {{-1, 0, 1, 2}, {-1, -1, 3, 4}, {-1, -1, -1, 5}, {-1, -1, -1, -1}};
    return table[i][j];
}

AlgebraElement CommutationTable::bracket(Generator a, Generator b) const {
    if (a == b) return AlgebraElement(order_);
    if (index_of(a) < index_of(b)) return brackets_[pair_index(a, b)];
    return -brackets_[pair_index(b, a)];
}

CommutationTable CommutationTable::substitute(ParameterId p, const Series& value) const {
    std::array<AlgebraElement, 6> b;
    for (int i = 0; i < 6; ++i) b[i] = brackets_[i].substitute(p, value);
    return CommutationTable(name_, order_, std::move(b), degree_cap_, dual_names_);
}

const AlgebraElement& CommutationTable::multiply(const Monomial& a, const Monomial& b) const {
    std::lock_guard lock(cache_->mutex);
    auto key = std::make_pair(a, b);
    if (auto it = cache_->products.find(key); it != cache_->products.end()) return it->second;

    const Series one(Rational(1), order_);
    AlgebraElement result(order_);
    if (b.is_identity() || a.is_identity()) {
        Monomial m;
        for (int i = 0; i < 4; ++i) m.e[i] = static_cast<std::uint8_t>(a.e[i] + b.e[i]);
        result.add_term(m, one);
    } else if (b.degree() == 1) {
        Generator g = b.letters().front();
        result = multiply_generator(a, g);
    } else {
        result = AlgebraElement::term(a, one);
        for (Generator g : b.letters()) {
            AlgebraElement next(order_);
            for (const auto& [m, s] : result.terms()) {
                const AlgebraElement& prod = multiply(m, Monomial::of(g));
                for (const auto& [pm, ps] : prod.terms()) next.add_term(pm, s * ps);
            }
            result = std::move(next);
        }
    }
    for (const auto& [m, s] : result.terms())
        if (m.degree() > degree_cap_)
            throw CapExceededError("monomial degree " + std::to_string(m.degree()) + " exceeds cap " +
                                   std::to_string(degree_cap_) + " in table " + name_);
    return cache_->products.emplace(key, std::move(result)).first->second;
}

AlgebraElement CommutationTable::multiply_generator(const Monomial& m, Generator g) const {
    const Series one(Rational(1), order_);
    int last = -1;
    for (int i = 3; i >= 0; --i)
        if (m.e[i] > 0) {
            last = i;
            break;
        }
    if (last <= index_of(g)) {
        Monomial r = m;
        r.e[index_of(g)]++;
        return AlgebraElement::term(r, one);
    }
    // m = m' L with L > g:  m' L g = (m' g) L - m' [g, L]
    Generator top = static_cast<Generator>(last);
    Monomial rest = m;
    rest.e[last]--;
    AlgebraElement result(order_);
    const AlgebraElement& left = multiply(rest, Monomial::of(g));
    for (const auto& [lm, ls] : left.terms()) {
        const AlgebraElement& prod = multiply(lm, Monomial::of(top));
        for (const auto& [pm, ps] : prod.terms()) result.add_term(pm, ls * ps);
    }
    const AlgebraElement& br = brackets_[pair_index(g, top)];
    for (const auto& [bm, bs] : br.terms()) {
        const AlgebraElement& prod = multiply(rest, bm);
        for (const auto& [pm, ps] : prod.terms()) result.add_term(pm, -(bs * ps));
    }
    return result;
}

AlgebraElement multiply(const AlgebraElement& a, const AlgebraElement& b, const CommutationTable& table) {
    AlgebraElement r(table.order());
    for (const auto& [am, as] : a.terms())
        for (const auto& [bm, bs] : b.terms()) {
            Series c = as * bs;
            if (c.is_zero()) continue;
            const AlgebraElement& prod = table.multiply(am, bm);
            for (const auto& [pm, ps] : prod.terms()) r.add_term(pm, c * ps);
        }
    return r;
}

AlgebraElement commutator(const AlgebraElement& a, const AlgebraElement& b, const CommutationTable& table) {
    return multiply(a, b, table) - multiply(b, a, table);
}

AlgebraElement power(const AlgebraElement& a, int k, const CommutationTable& table) {
    AlgebraElement r = AlgebraElement::scalar(Rational(1), table.order());
    for (int i = 0; i < k; ++i) r = multiply(r, a, table);
    return r;
}

AlgebraElement normal_order(std::span<const Generator> word, const Series& scalar, const CommutationTable& table,
                            SwapStrategy strategy, std::uint64_t seed) {
    using Word = std::vector<Generator>;
    std::mt19937_64 rng(seed);
    std::map<Word, Series> work;
    auto push = [&](Word w, const Series& c) {
        if (c.is_zero()) return;
        if (static_cast<int>(w.size()) > table.degree_cap())
            throw CapExceededError("word length exceeds degree cap during normal ordering");
        auto [it, inserted] = work.try_emplace(std::move(w), c);
        if (!inserted) {
            it->second += c;
            if (it->second.is_zero()) work.erase(it);
        }
    };
    push(Word(word.begin(), word.end()), scalar);

    AlgebraElement result(table.order());
    while (!work.empty()) {
        auto node = work.extract(work.begin());
        const Word& w = node.key();
        const Series& c = node.mapped();
        std::vector<std::size_t> inversions;
        for (std::size_t i = 0; i + 1 < w.size(); ++i)
            if (index_of(w[i]) > index_of(w[i + 1])) inversions.push_back(i);
        if (inversions.empty()) {
            Monomial m;
            for (auto g : w) m.e[index_of(g)]++;
            result.add_term(m, c);
            continue;
        }
        std::size_t pos = inversions.front();
        if (strategy == SwapStrategy::Rightmost) pos = inversions.back();
        if (strategy == SwapStrategy::Random)
            pos = inversions[std::uniform_int_distribution<std::size_t>(0, inversions.size() - 1)(rng)];

        Generator big = w[pos], small = w[pos + 1];
        Word swapped = w;
        std::swap(swapped[pos], swapped[pos + 1]);
        push(swapped, c);
        // big small = small big - [small, big]
        const AlgebraElement br = table.bracket(small, big);
        for (const auto& [bm, bs] : br.terms()) {
            Word nw(w.begin(), w.begin() + static_cast<std::ptrdiff_t>(pos));
            auto mid = bm.letters();
            nw.insert(nw.end(), mid.begin(), mid.end());
            nw.insert(nw.end(), w.begin() + static_cast<std::ptrdiff_t>(pos) + 2, w.end());
            push(std::move(nw), -(c * bs));
        }
    }
    return result;
}

bool JacobiReport::passed() const {
    return std::all_of(entries.begin(), entries.end(), [](const Entry& e) { return e.residual.is_zero(); });
}

JacobiReport verify_jacobi(const CommutationTable& table) {
    JacobiReport report;
    const int n = table.order();
    for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j)
            for (int k = j + 1; k < 4; ++k) {
                auto x = AlgebraElement::generator(kGenerators[i], n);
                auto y = AlgebraElement::generator(kGenerators[j], n);
                auto z = AlgebraElement::generator(kGenerators[k], n);
                auto r = commutator(commutator(x, y, table), z, table) +
                         commutator(commutator(y, z, table), x, table) +
                         commutator(commutator(z, x, table), y, table);
                report.entries.push_back({{kGenerators[i], kGenerators[j], kGenerators[k]}, std::move(r)});
            }
    return report;
}

AlgebraElement generator_function(Generator g, const Series& scale, std::span<const Rational> coeffs, int shift) {
    const int n = scale.order();
    AlgebraElement r(n);
    Series p(Rational(1), n);
    for (std::size_t k = 0; k < coeffs.size(); ++k) {
        if (k > 0) {
            p = p * scale;
            if (p.is_zero()) break;
        }
        if (coeffs[k] == 0) continue;
        r.add_term(Monomial::of(g, static_cast<int>(k) + shift), p * coeffs[k]);
    }
    return r;
}

// ---------------------------------------------------------------- TensorElement

TensorElement::TensorElement(int rank, int order) : rank_(rank), order_(order) {
    if (rank < 1 || rank > 3) throw RankMismatchError("tensor rank must be 1, 2 or 3");
}

TensorElement TensorElement::identity(int rank, int order) {
    TensorElement t(rank, order);
    t.add_term(Key{}, Series(Rational(1), order));
    return t;
}

TensorElement TensorElement::outer(std::span<const AlgebraElement> legs) {
    if (legs.empty() || legs.size() > 3) throw RankMismatchError("outer product needs 1..3 legs");
    const int n = legs[0].order();
    TensorElement t(static_cast<int>(legs.size()), n);
    t.add_term(Key{}, Series(Rational(1), n));
    for (std::size_t l = 0; l < legs.size(); ++l) {
        if (legs[l].order() != n) throw OrderMismatchError("outer product legs have different orders");
        TensorElement next(t.rank(), n);
        for (const auto& [k, c] : t.terms())
            for (const auto& [m, s] : legs[l].terms()) {
                Key nk = k;
                nk[l] = m;
                next.add_term(nk, c * s);
            }
        t = std::move(next);
    }
    return t;
}

TensorElement TensorElement::outer(const AlgebraElement& a, const AlgebraElement& b) {
    std::array<AlgebraElement, 2> legs{a, b};
    return outer(std::span<const AlgebraElement>(legs));
}

TensorElement TensorElement::outer(const AlgebraElement& a, const AlgebraElement& b, const AlgebraElement& c) {
    std::array<AlgebraElement, 3> legs{a, b, c};
    return outer(std::span<const AlgebraElement>(legs));
}

Series TensorElement::coefficient(const Key& k) const {
    auto it = terms_.find(k);
    return it == terms_.end() ? Series(order_) : it->second;
}

void TensorElement::add_term(const Key& k, const Series& s) {
    if (s.order() != order_) throw OrderMismatchError("tensor and coefficient orders differ");
    if (s.is_zero()) return;
    auto [it, inserted] = terms_.try_emplace(k, s);
    if (!inserted) {
        it->second += s;
        if (it->second.is_zero()) terms_.erase(it);
    }
}

std::optional<int> TensorElement::lowest_order() const {
    std::optional<int> low;
    for (const auto& [k, s] : terms_) {
        auto d = s.lowest_degree();
        if (d && (!low || *d < *low)) low = d;
    }
    return low;
}

void TensorElement::check_compatible(const TensorElement& o) const {
    if (rank_ != o.rank_) throw RankMismatchError("tensor ranks differ");
    if (order_ != o.order_) throw OrderMismatchError("tensor orders differ");
}

TensorElement TensorElement::operator-() const {
    TensorElement r(*this);
    for (auto& [k, s] : r.terms_) s = -s;
    return r;
}

TensorElement& TensorElement::operator+=(const TensorElement& o) {
    check_compatible(o);
    for (const auto& [k, s] : o.terms_) add_term(k, s);
    return *this;
}

TensorElement& TensorElement::operator-=(const TensorElement& o) {
    check_compatible(o);
    for (const auto& [k, s] : o.terms_) add_term(k, -s);
    return *this;
}

TensorElement& TensorElement::operator*=(const Series& s) {
    return *this = map_coefficients([&](const Series& c) { return c * s; });
}

TensorElement& TensorElement::operator*=(const Rational& c) {
    return *this = map_coefficients([&](const Series& s) { return s * c; });
}

TensorElement TensorElement::map_coefficients(const std::function<Series(const Series&)>& f) const {
    TensorElement r(rank_, order_);
    for (const auto& [k, s] : terms_) r.add_term(k, f(s));
    return r;
}

TensorElement TensorElement::substitute(ParameterId p, const Series& value) const {
    return map_coefficients([&](const Series& s) { return s.substitute(p, value); });
}

TensorElement TensorElement::homogeneous_part(int d) const {
    return map_coefficients([&](const Series& s) { return s.homogeneous_part(d); });
}

TensorElement TensorElement::undeformed() const {
    return map_coefficients([&](const Series& s) { return Series(s.constant_term(), s.order()); });
}

std::string TensorElement::to_string(bool dual) const {
    std::vector<std::string> parts;
    for (const auto& [k, s] : terms_) {
        std::string legs;
        for (int l = 0; l < rank_; ++l) {
            if (l) legs += " ⊗ ";
            legs += k[l].to_string(dual);
        }
        parts.push_back(coefficient_prefix(s) + legs);
    }
    return join_terms(parts);
}

TensorElement tensor_multiply(const TensorElement& a, const TensorElement& b, const CommutationTable& table) {
    if (a.rank() != b.rank()) throw RankMismatchError("tensor_multiply: ranks differ");
    const int rank = a.rank();
    const int n = table.order();
    TensorElement r(rank, n);
    for (const auto& [ka, ca] : a.terms())
        for (const auto& [kb, cb] : b.terms()) {
            Series c = ca * cb;
            if (c.is_zero()) continue;
            std::array<const AlgebraElement*, 3> legs{};
            for (int l = 0; l < rank; ++l) legs[l] = &table.multiply(ka[l], kb[l]);
            // outer product of the leg products
            TensorElement::Key key{};
            auto recurse = [&](auto&& self, int l, const Series& acc) -> void {
                if (l == rank) {
                    r.add_term(key, acc);
                    return;
                }
                for (const auto& [m, s] : legs[l]->terms()) {
                    key[l] = m;
                    if (s.is_one())
                        self(self, l + 1, acc);
                    else
                        self(self, l + 1, acc * s);
                }
            };
            recurse(recurse, 0, c);
        }
    return r;
}

TensorElement tensor_commutator(const TensorElement& a, const TensorElement& b, const CommutationTable& table) {
    return tensor_multiply(a, b, table) - tensor_multiply(b, a, table);
}

TensorElement wedge(const AlgebraElement& x, const AlgebraElement& y) {
    return TensorElement::outer(x, y) - TensorElement::outer(y, x);
}

TensorElement wedge(const AlgebraElement& x, const AlgebraElement& y, const AlgebraElement& z) {
    return TensorElement::outer(x, y, z) - TensorElement::outer(x, z, y) - TensorElement::outer(y, x, z) +
           TensorElement::outer(y, z, x) + TensorElement::outer(z, x, y) - TensorElement::outer(z, y, x);
}

TensorElement flip(const TensorElement& t) {
    if (t.rank() != 2) throw RankMismatchError("flip requires a rank-2 tensor");
    TensorElement r(2, t.order());
    for (const auto& [k, s] : t.terms()) r.add_term({k[1], k[0], Monomial{}}, s);
    return r;
}

TensorElement embed(const TensorElement& r, int i, int j) {
    if (r.rank() != 2) throw RankMismatchError("embed requires a rank-2 tensor");
    if (!(0 <= i && i < j && j < 3)) throw std::invalid_argument("embed legs must satisfy 0 <= i < j < 3");
    TensorElement t(3, r.order());
    for (const auto& [k, s] : r.terms()) {
        TensorElement::Key nk{};
        nk[i] = k[0];
        nk[j] = k[1];
        t.add_term(nk, s);
    }
    return t;
}

TensorElement primitive(const AlgebraElement& x, int rank) {
    TensorElement t(rank, x.order());
    for (const auto& [m, s] : x.terms())
        for (int l = 0; l < rank; ++l) {
            TensorElement::Key k{};
            k[l] = m;
            t.add_term(k, s);
        }
    return t;
}

bool is_skew(const TensorElement& r) { return r.rank() == 2 && (r + flip(r)).is_zero(); }

TensorElement schouten(const TensorElement& r, const CommutationTable& table) {
    if (!is_skew(r)) throw SkewnessError("schouten bracket requires a skew-symmetric rank-2 tensor");
    auto r12 = embed(r, 0, 1), r13 = embed(r, 0, 2), r23 = embed(r, 1, 2);
    return tensor_commutator(r12, r13, table) + tensor_commutator(r12, r23, table) +
           tensor_commutator(r13, r23, table);
}

TensorElement map_leg(const TensorElement& t, int leg, const std::function<AlgebraElement(const Monomial&)>& f) {
    if (leg < 0 || leg >= t.rank()) throw std::out_of_range("map_leg: leg out of range");
    std::map<Monomial, AlgebraElement> memo;
    TensorElement r(t.rank(), t.order());
    for (const auto& [k, s] : t.terms()) {
        auto it = memo.find(k[leg]);
        if (it == memo.end()) it = memo.emplace(k[leg], f(k[leg])).first;
        for (const auto& [m, c] : it->second.terms()) {
            auto nk = k;
            nk[leg] = m;
            r.add_term(nk, s * c);
        }
    }
    return r;
}

TensorElement expand_leg(const TensorElement& t, int leg, const std::function<TensorElement(const Monomial&)>& f) {
    if (t.rank() != 2) throw RankMismatchError("expand_leg supports rank-2 input");
    if (leg < 0 || leg > 1) throw std::out_of_range("expand_leg: leg out of range");
    std::map<Monomial, TensorElement> memo;
    TensorElement r(3, t.order());
    for (const auto& [k, s] : t.terms()) {
        auto it = memo.find(k[leg]);
        if (it == memo.end()) it = memo.emplace(k[leg], f(k[leg])).first;
        if (it->second.rank() != 2) throw RankMismatchError("expand_leg: image must be rank 2");
        for (const auto& [ik, c] : it->second.terms()) {
            TensorElement::Key nk{};
            if (leg == 0) {
                nk = {ik[0], ik[1], k[1]};
            } else {
                nk = {k[0], ik[0], ik[1]};
            }
            r.add_term(nk, s * c);
        }
    }
    return r;
}

AlgebraElement contract(const TensorElement& t, const CommutationTable& table,
                        const std::function<AlgebraElement(const Monomial&)>& left,
                        const std::function<AlgebraElement(const Monomial&)>& right) {
    if (t.rank() != 2) throw RankMismatchError("contract requires a rank-2 tensor");
    const int n = table.order();
    auto as_element = [n](const Monomial& m) { return AlgebraElement::term(m, Series(Rational(1), n)); };
    AlgebraElement r(n);
    for (const auto& [k, s] : t.terms()) {
        AlgebraElement a = left ? left(k[0]) : as_element(k[0]);
        AlgebraElement b = right ? right(k[1]) : as_element(k[1]);
        r += multiply(a * s, b, table);
    }
    return r;
}

TensorElement exp(const TensorElement& a, const CommutationTable& table) {
    for (const auto& [k, s] : a.terms())
        if (s.constant_term() != 0)
            throw NonNilpotentExponentError("tensor exponential needs coefficients without constant term");
    TensorElement sum = TensorElement::identity(a.rank(), a.order());
    TensorElement term = sum;
    for (int k = 1; k <= a.order(); ++k) {
        term = tensor_multiply(term, a, table) * Rational(1, k);
        if (term.is_zero()) break;
        sum += term;
    }
    return sum;
}

TensorElement inverse(const TensorElement& r, const CommutationTable& table) {
    TensorElement one = TensorElement::identity(r.rank(), r.order());
    if (!(r.undeformed() == one)) throw std::domain_error("inverse requires unit leading term");
    TensorElement q = one - r;  // r = 1 - q,  r^-1 = Σ q^k
    TensorElement sum = one, term = one;
    for (int k = 1; k <= r.order(); ++k) {
        term = tensor_multiply(term, q, table);
        if (term.is_zero()) break;
        sum += term;
    }
    return sum;
}

}  // namespace galilei
