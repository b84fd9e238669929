#include "todkit/classify.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "todkit/tod.hpp"

namespace todkit {

namespace {

using boost::multiprecision::cpp_int;

cpp_int floor_q(const Rational& q) {
    const cpp_int n = boost::multiprecision::numerator(q), d = boost::multiprecision::denominator(q);
    cpp_int f = n / d;
    if (n % d != 0 && n < 0) f -= 1;
    return f;
}

cpp_int ceil_q(const Rational& q) {
    const cpp_int f = floor_q(q);
    return Rational(f) == q ? f : cpp_int(f + 1);
}

bool is_integer(const Rational& q) { return boost::multiprecision::denominator(q) == 1; }

// extended value: inf in {-1, 0, +1}
struct Ext {
    int inf = 0;
    Rational v = 0;
};

Ext lo_of(const Interval& x) { return x.lo.value ? Ext{0, *x.lo.value} : Ext{-1, 0}; }
Ext hi_of(const Interval& x) { return x.hi.value ? Ext{0, *x.hi.value} : Ext{1, 0}; }

int sign(const Ext& e) { return e.inf != 0 ? e.inf : (e.v > 0 ? 1 : (e.v < 0 ? -1 : 0)); }

Ext mul(const Ext& a, const Ext& b) {
    if (a.inf == 0 && b.inf == 0) return {0, a.v * b.v};
    if (sign(a) == 0 || sign(b) == 0) return {0, 0};
    return {sign(a) * sign(b), 0};
}

bool less(const Ext& a, const Ext& b) {
    if (a.inf != b.inf) return a.inf < b.inf;
    return a.inf == 0 && a.v < b.v;
}

bool same(const Ext& a, const Ext& b) { return a.inf == b.inf && (a.inf != 0 || a.v == b.v); }

Bound to_bound(const Ext& e, bool open) {
    if (e.inf != 0) return Bound{std::nullopt, true};
    return Bound{e.v, open};
}

Interval reciprocal(const Interval& b) {
    const Ext lo = lo_of(b), hi = hi_of(b);
    if (!(sign(lo) >= 0 || sign(hi) <= 0) || (sign(lo) == 0 && !b.lo.open) || (sign(hi) == 0 && !b.hi.open))
        throw InvalidInput("interval division by an interval containing 0");
    auto inv = [](const Ext& e, int side) -> Ext {
        if (e.inf != 0) return {0, 0};
        if (e.v == 0) return {side, 0};
        return {0, Rational(1) / e.v};
    };
    // the sign side of zero endpoints decides the direction of infinity
    const int s = sign(lo) > 0 || (sign(lo) == 0) ? 1 : -1;
    Interval r;
    r.lo = to_bound(inv(hi, s), b.hi.open);
    r.hi = to_bound(inv(lo, s), b.lo.open);
    if (hi.inf != 0) r.lo.open = true;
    if (lo.inf != 0) r.hi.open = true;
    return r;
}

Interval product(const Interval& a, const Interval& b) {
    struct Cand {
        Ext v;
        bool open;
    };
    const std::array<std::pair<Ext, bool>, 2> ea{{{lo_of(a), a.lo.open}, {hi_of(a), a.hi.open}}};
    const std::array<std::pair<Ext, bool>, 2> eb{{{lo_of(b), b.lo.open}, {hi_of(b), b.hi.open}}};
    std::vector<Cand> c;
    for (const auto& x : ea)
        for (const auto& y : eb) {
            bool open = x.second || y.second;
            if ((sign(x.first) == 0 && !x.second) || (sign(y.first) == 0 && !y.second)) open = false;
            c.push_back({mul(x.first, y.first), open});
        }
    Cand lo = c[0], hi = c[0];
    for (const auto& k : c) {
        if (less(k.v, lo.v) || (same(k.v, lo.v) && !k.open)) lo = k;
        if (less(hi.v, k.v) || (same(k.v, hi.v) && !k.open)) hi = k;
    }
    return Interval{to_bound(lo.v, lo.open), to_bound(hi.v, hi.open)};
}

std::string fmt_q(const Rational& q) { return to_string(q); }

// slope facts used by the local analysis
struct Slope {
    int sign;  // -1, 0, +1
    Interval range;
    std::string name;
};

struct TripleResult {
    bool feasible = true;
    int eps = 1;
    Interval l = Interval::all();
    bool from_gap = false;  // l fixed by the rod-length equation
    std::string reason;
};

Interval ordered_ratio(const Slope& x, const Slope& b, bool x_below) {
    // x/b with x < b (x_below) or x > b
    Interval r = x.range / b.range;
    const bool gt_one = (b.sign < 0) == x_below;
    return intersect(r, gt_one ? Interval::open(Rational(1), std::nullopt) : Interval::open(std::nullopt, Rational(1)));
}

TripleResult analyze(int j, const Slope& a, const Slope& b, const Slope& d) {
    TripleResult t;
    std::ostringstream os;
    const std::string J = std::to_string(j);
    if (b.sign == 0) {
        // a + eps d = 0 with a < 0 < d
        t.eps = 1;
        t.from_gap = true;
        t.l = Interval::open(Rational(-2), std::nullopt);
        return t;
    }
    if (a.sign == 0) {
        // f_{j-1}^2 = -eps f_{j+1}^2 (d - b)/b with (d - b)/b > 0, and f_{j-1} = f_j < f_{j+1}
        t.eps = -1;
        const Interval ratio = intersect(ordered_ratio(d, b, false), Interval::open(std::nullopt, Rational(2)));
        t.l = product(Interval::point(Rational(-1)), ratio);
        os << "j=" << J << ": f'_" << j - 1 << " = 0 forces eps_" << J << " = -1 (eps = +1 makes f_" << j - 1
           << "^2 negative); f_" << j + 1 << " > f_" << J << " pins l_" << J << " = -f'_" << j + 1 << "/f'_" << J
           << " to " << t.l.str();
    } else if (d.sign == 0) {
        t.eps = -1;
        const Interval ratio = intersect(ordered_ratio(a, b, true), Interval::open(std::nullopt, Rational(2)));
        t.l = ratio;
        os << "j=" << J << ": f'_" << j + 1 << " = 0 forces eps_" << J << " = -1 (eps = +1 makes f_" << j + 1
           << "^2 negative); f_" << j + 1 << " < f_" << J << " pins l_" << J << " = f'_" << j - 1 << "/f'_" << J
           << " to " << t.l.str();
    } else {
        t.eps = 1;
        const Interval sum = (a.range + d.range) / b.range;
        const Interval split = ordered_ratio(a, b, true) + ordered_ratio(d, b, false);
        const Interval pinch = Interval::open(std::nullopt, Rational(2));
        t.l = intersect(intersect(sum, split), pinch);
        os << "j=" << J << ": slopes (" << a.name << "," << b.name << "," << d.name << ") force eps_" << J
           << " = 1 (eps = -1 makes f_" << j + 1 << "^2 negative); ordering gives l_" << J << " in "
           << intersect(sum, split).str() << " and f " << (b.sign < 0 ? "decreasing" : "increasing") << " on I_"
           << J << " gives l_" << J << " < 2, leaving " << t.l.str();
    }
    t.reason = os.str();
    if (t.l.empty() || (t.l.bounded() && integers_in(t.l).empty())) {
        t.feasible = false;
        t.reason += ": no integer l_" + J;
        if (a.sign != 0 && d.sign != 0) t.reason += " (l_j<2, which is a contradiction)";
    }
    return t;
}

std::string pattern_name(const std::vector<int>& signs) {
    std::string s = "[";
    for (std::size_t i = 0; i < signs.size(); ++i) {
        if (i) s += ",";
        s += signs[i] < 0 ? "-" : (signs[i] > 0 ? "+" : "0");
    }
    return s + "]";
}

std::vector<std::vector<int>> patterns(int n) {
    std::vector<std::vector<int>> out;
    const int m = n - 1;
    for (int k = 0; k <= m; ++k) {
        std::vector<int> p(static_cast<std::size_t>(m), 1);
        for (int i = 0; i < k; ++i) p[static_cast<std::size_t>(i)] = -1;
        out.push_back(p);
        if (k < m) {
            p[static_cast<std::size_t>(k)] = 0;
            out.push_back(p);
        }
    }
    return out;
}

using Vec2 = Pair<long long>;

std::vector<Vec2> propagate(const std::vector<long long>& l, const std::vector<int>& eps) {
    std::vector<Vec2> v{{0, 1}, {1, 0}};
    for (std::size_t j = 0; j < l.size(); ++j) {
        const Vec2& a = v[j];
        const Vec2& b = v[j + 1];
        v.push_back({eps[j] * (l[j] * b[0] - a[0]), eps[j] * (l[j] * b[1] - a[1])});
    }
    return v;
}

LensLabel lens_of(const std::vector<Vec2>& v) {
    std::vector<Pair<Rational>> rv;
    std::vector<Rational> tp;
    for (const auto& x : v) rv.push_back({Rational(x[0]), Rational(x[1])});
    return asymptotic_class(make_structure(tp, rv));
}

// solve the d_y components for the interior slopes given the levels:
// returns the nullity, or -1 if inconsistent
int solve_slopes(int n, const std::vector<int>& sgn, const std::vector<long long>& l, const std::vector<int>& eps,
                 std::vector<Rational>& particular) {
    const int m = n - 1;
    // rows: a + eps d - l b = 0 for triples with b != 0
    std::vector<std::vector<Rational>> A;
    for (int j = 1; j <= m; ++j) {
        std::vector<Rational> row(static_cast<std::size_t>(m + 1), Rational(0));
        auto put = [&](int idx, const Rational& coef) {
            if (idx == 0) row[static_cast<std::size_t>(m)] -= coef * -1;
            else if (idx == n) row[static_cast<std::size_t>(m)] -= coef * 1;
            else row[static_cast<std::size_t>(idx - 1)] += coef;
        };
        if (sgn[static_cast<std::size_t>(j)] == 0) {
            put(j - 1, 1);
            put(j + 1, eps[static_cast<std::size_t>(j - 1)]);
        } else {
            put(j - 1, 1);
            put(j + 1, eps[static_cast<std::size_t>(j - 1)]);
            put(j, Rational(-l[static_cast<std::size_t>(j - 1)]));
        }
        A.push_back(row);
    }
    // zero slopes are fixed
    for (int i = 1; i <= m; ++i)
        if (sgn[static_cast<std::size_t>(i)] == 0) {
            std::vector<Rational> row(static_cast<std::size_t>(m + 1), Rational(0));
            row[static_cast<std::size_t>(i - 1)] = 1;
            A.push_back(row);
        }
    int rank = 0;
    const int rows = static_cast<int>(A.size());
    std::vector<int> pivcol;
    for (int col = 0; col < m && rank < rows; ++col) {
        int piv = -1;
        for (int r = rank; r < rows; ++r)
            if (A[static_cast<std::size_t>(r)][static_cast<std::size_t>(col)] != 0) {
                piv = r;
                break;
            }
        if (piv < 0) continue;
        std::swap(A[static_cast<std::size_t>(piv)], A[static_cast<std::size_t>(rank)]);
        auto& P = A[static_cast<std::size_t>(rank)];
        const Rational p = P[static_cast<std::size_t>(col)];
        for (auto& x : P) x /= p;
        for (int r = 0; r < rows; ++r) {
            if (r == rank) continue;
            auto& R = A[static_cast<std::size_t>(r)];
            const Rational f = R[static_cast<std::size_t>(col)];
            if (f == 0) continue;
            for (int c = 0; c <= m; ++c) R[static_cast<std::size_t>(c)] -= f * P[static_cast<std::size_t>(c)];
        }
        pivcol.push_back(col);
        ++rank;
    }
    for (int r = rank; r < rows; ++r)
        if (A[static_cast<std::size_t>(r)][static_cast<std::size_t>(m)] != 0) return -1;
    particular.assign(static_cast<std::size_t>(m), Rational(0));
    for (int r = 0; r < rank; ++r)
        particular[static_cast<std::size_t>(pivcol[static_cast<std::size_t>(r)])] =
            A[static_cast<std::size_t>(r)][static_cast<std::size_t>(m)];
    return m - rank;
}

}  // namespace

Interval Interval::point(const Rational& v) { return Interval{Bound{v, false}, Bound{v, false}}; }

Interval Interval::open(std::optional<Rational> lo, std::optional<Rational> hi) {
    return Interval{Bound{std::move(lo), true}, Bound{std::move(hi), true}};
}

Interval Interval::all() { return open(std::nullopt, std::nullopt); }

bool Interval::empty() const {
    if (!lo.value || !hi.value) return false;
    if (*lo.value > *hi.value) return true;
    return *lo.value == *hi.value && (lo.open || hi.open);
}

bool Interval::bounded() const { return lo.value && hi.value; }

std::string Interval::str() const {
    std::string s = lo.open ? "(" : "[";
    s += lo.value ? fmt_q(*lo.value) : "-inf";
    s += ", ";
    s += hi.value ? fmt_q(*hi.value) : "inf";
    s += hi.open ? ")" : "]";
    return s;
}

Interval operator+(const Interval& a, const Interval& b) {
    Interval r;
    if (a.lo.value && b.lo.value) r.lo = Bound{*a.lo.value + *b.lo.value, a.lo.open || b.lo.open};
    if (a.hi.value && b.hi.value) r.hi = Bound{*a.hi.value + *b.hi.value, a.hi.open || b.hi.open};
    return r;
}

Interval operator/(const Interval& a, const Interval& b) { return product(a, reciprocal(b)); }

Interval intersect(const Interval& a, const Interval& b) {
    Interval r = a;
    if (b.lo.value && (!r.lo.value || *b.lo.value > *r.lo.value || (*b.lo.value == *r.lo.value && b.lo.open)))
        r.lo = b.lo;
    if (b.hi.value && (!r.hi.value || *b.hi.value < *r.hi.value || (*b.hi.value == *r.hi.value && b.hi.open)))
        r.hi = b.hi;
    return r;
}

std::vector<long long> integers_in(const Interval& x) {
    if (!x.bounded()) throw InvalidInput("integers_in needs a bounded interval");
    std::vector<long long> out;
    if (x.empty()) return out;
    cpp_int lo = ceil_q(*x.lo.value), hi = floor_q(*x.hi.value);
    if (x.lo.open && is_integer(*x.lo.value)) lo += 1;
    if (x.hi.open && is_integer(*x.hi.value)) hi -= 1;
    for (cpp_int k = lo; k <= hi; ++k) out.push_back(static_cast<long long>(k));
    return out;
}

SlopeData slope_data(const ExactRodData& rods) {
    const ExactRodStructure s = rod_vectors(rods);
    SlopeData d;
    d.n = static_cast<int>(rods.nuts.size());
    d.slopes = s.slopes;
    d.values = s.values;
    for (std::size_t i = 1; i < rods.nuts.size(); ++i) d.gaps.push_back(rods.nuts[i].z - rods.nuts[i - 1].z);
    for (const auto& r : gl2z_compatibility(s)) {
        d.levels.push_back(r.integral ? r.l : static_cast<long long>(floor_q(r.l_raw)));
        d.signs.push_back(r.eps_raw > 0 ? 1 : -1);
    }
    return d;
}

std::pair<Rational, Rational> regularity_residuals(const SlopeData& data, int j) {
    if (j < 1 || j > data.n - 1) throw InvalidInput("regularity index " + std::to_string(j) + " out of range");
    const auto J = static_cast<std::size_t>(j);
    const Rational& a = data.slopes[J - 1];
    const Rational& b = data.slopes[J];
    const Rational& d = data.slopes[J + 1];
    const Rational l(data.levels.at(J - 1));
    const Rational eps(data.signs.at(J - 1));
    const Rational& fj = data.values[J - 1];
    const Rational& fn = data.values[J];
    if (b == 0) return {a + eps * d, 2 * d * data.gaps.at(J - 1) - (2 + l) * fj};
    const Rational y = a + eps * d - l * b;
    if (a == 0) return {y, fj * fj * b + eps * fn * fn * (d - b)};
    if (d == 0) return {y, eps * fn * fn * b + fj * fj * (a - b)};
    return {y, fn * fn * (d - b) - eps * fj * fj * (b - a)};
}

DegeneracyReport verify_n1_degenerate(const RodData& rods, int grid) {
    DegeneracyReport r;
    const double L = data_scale(rods);
    double zbar = 0;
    for (const auto& n : rods.nuts) zbar += n.a * n.z;
    for (int i = 0; i < grid; ++i)
        for (int k = 0; k < grid; ++k) {
            const double rho = L * std::pow(10.0, -1.0 + 2.0 * i / std::max(1, grid - 1));
            const double zeta = zbar + L * (-5.0 + 10.0 * k / std::max(1, grid - 1)) + 0.137 * L;
            const TodFields f = tod_fields_from_potential(rods, rho, zeta, 0);
            const double term = std::abs(2 * f.z.value() / (2 * rods.c));
            r.max_abs_w = std::max(r.max_abs_w, std::abs(f.W.value()));
            r.scale = std::max(r.scale, term);
            ++r.samples;
        }
    r.degenerate = r.max_abs_w <= 1e-12 * r.scale;
    return r;
}

ClassificationReport search_admissible(int n_max, int l_bound, Asymptotics mode) {
    if (n_max < 1) throw InvalidInput("n_max must be at least 1");
    if (l_bound < 2) throw InvalidInput("l_bound must be at least 2");
    ClassificationReport rep;
    for (int n = 1; n <= n_max; ++n) {
        if (n == 1) {
            ++rep.branches;
            RodData one;
            one.c = -1;
            one.nuts = {{0.0, 1.0}};
            const DegeneracyReport d = verify_n1_degenerate(one);
            std::ostringstream os;
            os.precision(3);
            os << "f = |zeta - z_1| and V = V_0(rho, zeta - z_1) give W = 0 identically (max |W| = " << d.max_abs_w
               << " over " << d.samples << " samples, term scale " << d.scale << ")";
            if (!d.degenerate) os << " [numeric check did not confirm]";
            rep.certificates.push_back({"n=1 []", os.str()});
            continue;
        }
        for (const auto& pat : patterns(n)) {
            ++rep.branches;
            const std::string branch = "n=" + std::to_string(n) + " " + pattern_name(pat);
            std::vector<int> sgn{-1};
            sgn.insert(sgn.end(), pat.begin(), pat.end());
            sgn.push_back(1);
            std::vector<Slope> slopes;
            for (int i = 0; i <= n; ++i) {
                const int s = sgn[static_cast<std::size_t>(i)];
                Interval range = s == 0 ? Interval::point(0)
                                        : (s < 0 ? Interval::open(Rational(-1), Rational(0))
                                                 : Interval::open(Rational(0), Rational(1)));
                if (i == 0) range = Interval::point(-1);
                if (i == n) range = Interval::point(1);
                slopes.push_back({s, range, s < 0 ? "-" : (s > 0 ? "+" : "0")});
            }
            std::vector<TripleResult> triples;
            std::string fail;
            for (int j = 1; j < n; ++j) {
                auto t = analyze(j, slopes[static_cast<std::size_t>(j - 1)], slopes[static_cast<std::size_t>(j)],
                                 slopes[static_cast<std::size_t>(j + 1)]);
                if (!t.feasible) fail += (fail.empty() ? "" : "; ") + t.reason;
                triples.push_back(t);
            }
            if (!fail.empty()) {
                rep.certificates.push_back({branch, fail});
                continue;
            }
            // candidate levels per triple
            std::vector<std::vector<long long>> cand;
            std::vector<int> eps;
            for (int j = 1; j < n; ++j) {
                const auto& t = triples[static_cast<std::size_t>(j - 1)];
                eps.push_back(t.eps);
                if (t.from_gap && n == 2) {
                    // weights from slopes (A = 0): a_i = (f'_i - f'_{i-1})/2, f_1 = a_2 (z_2 - z_1);
                    // z_2 - z_1 = (2 + l) f_1 / (2 f'_2) fixes l
                    const Rational a2 = (slopes[2].range.lo.value.value() - Rational(0)) / 2;
                    const Rational l = Rational(2) / a2 - 2;
                    if (!is_integer(l)) {
                        rep.certificates.push_back({branch, "rod-length equation gives non-integer l_1 = " + fmt_q(l)});
                        cand.clear();
                        break;
                    }
                    cand.push_back({static_cast<long long>(boost::multiprecision::numerator(l))});
                } else if (t.l.bounded()) {
                    cand.push_back(integers_in(t.l));
                } else {
                    rep.consulted_l_bound = true;
                    Interval capped = intersect(t.l, Interval{Bound{Rational(-l_bound), false}, Bound{Rational(l_bound), false}});
                    cand.push_back(integers_in(capped));
                }
            }
            if (cand.size() != static_cast<std::size_t>(n - 1)) continue;
            // Cartesian product over the finite candidate sets
            std::vector<std::size_t> idx(cand.size(), 0);
            bool any = false;
            std::vector<std::string> notes;
            while (true) {
                std::vector<long long> l;
                for (std::size_t k = 0; k < cand.size(); ++k) l.push_back(cand[k][idx[k]]);
                std::vector<Rational> part;
                const int nullity = solve_slopes(n, sgn, l, eps, part);
                std::ostringstream lv;
                lv << "l = (";
                for (std::size_t k = 0; k < l.size(); ++k) lv << (k ? "," : "") << l[k];
                lv << ")";
                if (nullity < 0) {
                    notes.push_back(lv.str() + ": d_y equations inconsistent");
                } else {
                    const auto v = propagate(l, eps);
                    const LensLabel lens = lens_of(v);
                    Family fam;
                    fam.n = n;
                    fam.branch = branch;
                    fam.levels = l;
                    fam.signs = eps;
                    fam.lattice = v;
                    fam.lens = lens;
                    fam.slopes.push_back("-1");
                    for (int i = 1; i < n; ++i)
                        fam.slopes.push_back(nullity == 0 || sgn[static_cast<std::size_t>(i)] == 0
                                                 ? fmt_q(part[static_cast<std::size_t>(i - 1)])
                                                 : "s" + std::to_string(i));
                    fam.slopes.push_back("1");
                    if (nullity == 0) {
                        std::vector<Rational> s{Rational(-1)};
                        s.insert(s.end(), part.begin(), part.end());
                        s.push_back(1);
                        for (int i = 1; i <= n; ++i)
                            fam.weights.push_back((s[static_cast<std::size_t>(i)] - s[static_cast<std::size_t>(i - 1)]) / 2);
                    } else {
                        fam.note = std::to_string(nullity) + "-parameter slope family";
                    }
                    std::ostringstream lat;
                    for (std::size_t k = 0; k < v.size(); ++k)
                        lat << (k ? ", " : "") << "v_" << k << " = (" << v[k][0] << "," << v[k][1] << ")";
                    if (!lens.ale) {
                        const std::string why = lv.str() + ", lattice " + lat.str() + ": v_0 = " +
                                                (v.back()[1] == -1 && v.back()[0] == 0 ? "-v_" : "+-v_") +
                                                std::to_string(n) + ", semi-infinite rods parallel, incompatible with ALE asymptotics";
                        notes.push_back(why);
                        if (mode == Asymptotics::af) {
                            fam.note += (fam.note.empty() ? "" : "; ") + std::string("compatible with AF asymptotics only");
                            rep.informational.push_back(fam);
                        }
                    } else {
                        any = true;
                        rep.admissible.push_back(fam);
                    }
                }
                std::size_t k = 0;
                while (k < idx.size() && ++idx[k] == cand[k].size()) idx[k++] = 0;
                if (k == idx.size()) break;
            }
            if (!any) {
                std::string why;
                for (const auto& s : notes) why += (why.empty() ? "" : "; ") + s;
                if (why.empty()) why = "no integer levels survive";
                rep.certificates.push_back({branch, why});
            }
        }
    }
    return rep;
}

}  // namespace todkit
