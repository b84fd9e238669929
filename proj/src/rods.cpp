#include "todkit/rods.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <sstream>

#include "todkit/tod.hpp"

namespace todkit {

namespace {

template <typename T>
T absv(const T& x) {
    return x < 0 ? T(-x) : x;
}

double as_double(double x) { return x; }
double as_double(const Rational& x) { return x.convert_to<double>(); }

bool is_zero(double x) { return std::abs(x) < 1e-12; }
bool is_zero(const Rational& x) { return x == 0; }

template <typename T>
T span_of(const BasicRodData<T>& d) {
    if (d.nuts.size() < 2) return T(1);
    return d.nuts.back().z - d.nuts.front().z;
}

template <typename T>
T f_at(const BasicRodData<T>& d, const T& zeta) {
    T f(0);
    for (const auto& n : d.nuts) f += n.a * absv(T(zeta - n.z));
    return f;
}

template <typename T>
T h_axis(const BasicRodData<T>& d, const T& zeta) {
    T h(0);
    for (const auto& n : d.nuts) h += n.a * T(zeta - n.z) * absv(T(zeta - n.z));
    return h;
}

template <typename T>
std::vector<T> slopes_of(const BasicRodData<T>& d) {
    std::vector<T> s;
    const std::size_t n = d.nuts.size();
    for (std::size_t i = 0; i <= n; ++i) {
        T v(0);
        for (std::size_t j = 0; j < n; ++j) v += (j < i) ? d.nuts[j].a : T(-d.nuts[j].a);
        s.push_back(v);
    }
    return s;
}

template <typename T>
T sample_point(const BasicRodData<T>& d, std::size_t rod) {
    const std::size_t n = d.nuts.size();
    if (rod == 0) return d.nuts.front().z - span_of(d);
    if (rod == n) return d.nuts.back().z + span_of(d);
    return (d.nuts[rod - 1].z + d.nuts[rod].z) / 2;
}

template <typename T>
void fill_lattice(BasicRodStructure<T>& s) {
    s.lattice.clear();
    s.lattice_vectors.clear();
    s.lattice_integral = false;
    if (s.rod_vectors.size() < 2) return;
    const auto& v0 = s.rod_vectors[0];
    const auto& v1 = s.rod_vectors[1];
    // columns v1, v0
    const T det = v1[0] * v0[1] - v0[0] * v1[1];
    if (is_zero(det)) return;
    const T m00 = v0[1] / det, m01 = -v0[0] / det, m10 = -v1[1] / det, m11 = v1[0] / det;
    bool integral = true;
    for (const auto& v : s.rod_vectors) {
        Pair<T> w{m00 * v[0] + m01 * v[1], m10 * v[0] + m11 * v[1]};
        s.lattice.push_back(w);
        for (const auto& x : w) {
            if constexpr (std::is_same_v<T, Rational>) {
                if (boost::multiprecision::denominator(x) != 1) integral = false;
            } else {
                if (std::abs(x - std::round(x)) > 1e-9) integral = false;
            }
        }
    }
    s.lattice_integral = integral;
    if (!integral) return;
    for (const auto& w : s.lattice) {
        if constexpr (std::is_same_v<T, Rational>)
            s.lattice_vectors.push_back({static_cast<long long>(boost::multiprecision::numerator(w[0])),
                                         static_cast<long long>(boost::multiprecision::numerator(w[1]))});
        else
            s.lattice_vectors.push_back({std::llround(w[0]), std::llround(w[1])});
    }
}

template <typename T>
BasicRodStructure<T> build(const BasicRodData<T>& d) {
    const std::size_t n = d.nuts.size();
    if (n == 0) throw InvalidInput("rod data needs at least one turning point");
    if (is_zero(d.c)) throw InvalidInput("the constant c must be non-zero");
    BasicRodStructure<T> s;
    s.slopes = slopes_of(d);
    for (const auto& m : d.nuts) {
        s.turning_points.push_back(m.z);
        s.values.push_back(f_at(d, m.z));
    }
    std::vector<std::optional<T>> raw(n + 1);
    for (std::size_t i = 0; i <= n; ++i) {
        if (is_zero(s.slopes[i])) continue;
        const T zeta = sample_point(d, i);
        const T f = f_at(d, zeta);
        raw[i] = -(h_axis(d, zeta) - f * f / s.slopes[i]) / d.c;
    }
    s.gauge_constant = d.h_constant ? *d.h_constant : T(d.c * (*raw[0] + *raw[n]) / 2);
    for (std::size_t i = 0; i <= n; ++i) {
        if (raw[i]) {
            const T F = *raw[i] - s.gauge_constant / d.c;
            s.F.push_back(F);
            s.rod_vectors.push_back({T(-s.slopes[i] * F), s.slopes[i]});
        } else {
            s.F.push_back(std::nullopt);
            const T& fi = s.values[i - 1];
            s.rod_vectors.push_back({T(fi * fi / d.c), T(0)});
        }
    }
    fill_lattice(s);
    return s;
}

template <typename T>
std::vector<Gl2zRelation<T>> relations(const BasicRodStructure<T>& s, double tol) {
    std::vector<Gl2zRelation<T>> out;
    const auto& v = s.rod_vectors;
    for (std::size_t j = 1; j + 1 < v.size(); ++j) {
        Gl2zRelation<T> r{static_cast<int>(j), T(0), T(0), false};
        const auto &a = v[j - 1], &b = v[j], &c = v[j + 1];
        const T det = b[0] * c[1] - b[1] * c[0];
        if (is_zero(det)) {
            r.violation = "rod vectors v_" + std::to_string(j) + " and v_" + std::to_string(j + 1) + " are parallel";
            out.push_back(r);
            continue;
        }
        // a = alpha b + beta c
        const T alpha = (a[0] * c[1] - a[1] * c[0]) / det;
        const T beta = (b[0] * a[1] - b[1] * a[0]) / det;
        r.l_raw = alpha;
        r.eps_raw = -beta;
        bool l_int, e_unit;
        if constexpr (std::is_same_v<T, Rational>) {
            (void)tol;
            l_int = boost::multiprecision::denominator(alpha) == 1;
            e_unit = absv(r.eps_raw) == 1;
            if (l_int) r.l = static_cast<long long>(boost::multiprecision::numerator(alpha));
            if (e_unit) r.eps = r.eps_raw > 0 ? 1 : -1;
        } else {
            l_int = std::abs(alpha - std::round(alpha)) < tol;
            e_unit = std::abs(std::abs(r.eps_raw) - 1) < tol;
            if (l_int) r.l = std::llround(alpha);
            if (e_unit) r.eps = r.eps_raw > 0 ? 1 : -1;
        }
        r.integral = l_int && e_unit;
        std::ostringstream os;
        os.precision(12);
        if (!l_int) os << "l_" << j << " = " << as_double(alpha) << " is not an integer";
        if (!e_unit) os << (l_int ? "" : "; ") << "eps_" << j << " = " << as_double(r.eps_raw) << " is not +-1";
        r.violation = os.str();
        out.push_back(r);
    }
    return out;
}

template <typename T>
LensLabel lens(const BasicRodStructure<T>& s) {
    LensLabel L;
    if (!s.lattice_integral || s.lattice_vectors.size() < 2) {
        L.note = "rod vectors do not span an integral lattice";
        return L;
    }
    const auto& a = s.lattice_vectors.front();
    const auto& b = s.lattice_vectors.back();
    const long long det = a[0] * b[1] - a[1] * b[0];
    L.p = det < 0 ? -det : det;
    if (L.p == 0) {
        L.note = "semi-infinite rod vectors are parallel: incompatible with ALE asymptotics";
        return L;
    }
    L.ale = true;
    L.q = ((-b[1]) % L.p + L.p) % L.p;
    if (s.lattice_vectors.size() == 2) L.note = "single turning point: W vanishes identically";
    return L;
}

template <typename T>
FJump<T> jump(const BasicRodData<T>& d, int i) {
    const int n = static_cast<int>(d.nuts.size());
    if (i < 1 || i > n) throw InvalidInput("turning point index " + std::to_string(i) + " out of range");
    const auto s = slopes_of(d);
    const auto su = [&](int k) { return s[static_cast<std::size_t>(k)]; };
    const T fi = f_at(d, d.nuts[static_cast<std::size_t>(i - 1)].z);
    if (!is_zero(su(i - 1)) && !is_zero(su(i)))
        return {i - 1, i, T(fi * fi * (T(1) / su(i) - T(1) / su(i - 1)) / d.c)};
    if (is_zero(su(i - 1))) return jump(d, i - 1);
    if (i == n) throw InvalidInput("zero slope on the last rod");
    const T gap = d.nuts[static_cast<std::size_t>(i)].z - d.nuts[static_cast<std::size_t>(i - 1)].z;
    return {i - 1, i + 1, T(-(2 * fi * gap - fi * fi * (T(1) / su(i + 1) - T(1) / su(i - 1))) / d.c)};
}

template <typename T>
BasicRodStructure<T> make(std::vector<T> tp, std::vector<Pair<T>> vs) {
    BasicRodStructure<T> s;
    s.turning_points = std::move(tp);
    s.rod_vectors = std::move(vs);
    s.gauge_constant = T(0);
    fill_lattice(s);
    return s;
}

}  // namespace

ExactRodData to_exact(const RodData& rods) {
    ExactRodData e{Rational(rods.c), {}, std::nullopt};
    for (const auto& n : rods.nuts) e.nuts.push_back({Rational(n.z), Rational(n.a)});
    if (rods.h_constant) e.h_constant = Rational(*rods.h_constant);
    return e;
}

RodData to_double(const ExactRodData& rods) {
    RodData d;
    d.c = as_double(rods.c);
    for (const auto& n : rods.nuts) d.nuts.push_back({as_double(n.z), as_double(n.a)});
    if (rods.h_constant) d.h_constant = as_double(*rods.h_constant);
    return d;
}

Rational parse_rational(const std::string& text) {
    std::string t;
    for (char ch : text)
        if (!std::isspace(static_cast<unsigned char>(ch))) t += ch;
    if (t.empty()) throw InvalidInput("empty number");
    const auto slash = t.find('/');
    if (slash != std::string::npos) {
        const Rational den = parse_rational(t.substr(slash + 1));
        if (den == 0) throw InvalidInput("zero denominator in '" + text + "'");
        return parse_rational(t.substr(0, slash)) / den;
    }
    std::size_t pos = 0;
    bool neg = false;
    if (t[pos] == '+' || t[pos] == '-') neg = t[pos++] == '-';
    boost::multiprecision::cpp_int mant = 0;
    int scale = 0, digits = 0;
    bool dot = false;
    for (; pos < t.size(); ++pos) {
        const char ch = t[pos];
        if (std::isdigit(static_cast<unsigned char>(ch))) {
            mant = mant * 10 + (ch - '0');
            ++digits;
            if (dot) --scale;
        } else if (ch == '.' && !dot) {
            dot = true;
        } else {
            break;
        }
    }
    if (digits == 0) throw InvalidInput("malformed number '" + text + "'");
    if (pos < t.size()) {
        if (t[pos] != 'e' && t[pos] != 'E') throw InvalidInput("malformed number '" + text + "'");
        try {
            std::size_t used = 0;
            const std::string rest = t.substr(pos + 1);
            scale += std::stoi(rest, &used);
            if (used != rest.size()) throw InvalidInput("malformed number '" + text + "'");
        } catch (const std::logic_error&) {
            throw InvalidInput("malformed number '" + text + "'");
        }
    }
    Rational q(mant);
    const boost::multiprecision::cpp_int ten = boost::multiprecision::pow(boost::multiprecision::cpp_int(10),
                                                                          static_cast<unsigned>(std::abs(scale)));
    q = scale >= 0 ? Rational(q * ten) : Rational(q / ten);
    return neg ? Rational(-q) : q;
}

std::string to_string(const Rational& q) {
    std::ostringstream os;
    os << q;
    return os.str();
}

RodStructure rod_vectors(const RodData& rods) { return build(rods); }

ExactRodStructure rod_vectors(const ExactRodData& rods) { return build(rods); }

RodStructure make_structure(std::vector<double> tp, std::vector<Pair<double>> vs) {
    return make(std::move(tp), std::move(vs));
}

ExactRodStructure make_structure(std::vector<Rational> tp, std::vector<Pair<Rational>> vs) {
    return make(std::move(tp), std::move(vs));
}

std::vector<Gl2zRelation<double>> gl2z_compatibility(const RodStructure& s, double tol) {
    return relations(s, tol);
}

std::vector<Gl2zRelation<Rational>> gl2z_compatibility(const ExactRodStructure& s) { return relations(s, 0.0); }

LensLabel asymptotic_class(const RodStructure& s, double) { return lens(s); }
LensLabel asymptotic_class(const ExactRodStructure& s) { return lens(s); }

FJump<double> f_jump(const RodData& rods, int i) { return jump(rods, i); }
FJump<Rational> f_jump(const ExactRodData& rods, int i) { return jump(rods, i); }

double f_near_axis(const RodData& rods, double rho, double zeta) {
    return tod_fields(rods, rho, zeta, 0).F.value();
}

double axis_w(const RodData& rods, double zeta) {
    double f = 0, fp = 0, vzz = 0;
    for (const auto& n : rods.nuts) {
        const double d = zeta - n.z;
        if (d == 0) throw AxisEvaluationError("axis W requested at a turning point");
        f += n.a * std::abs(d);
        fp += n.a * (d > 0 ? 1.0 : -1.0);
        vzz -= 2 * n.a / std::abs(d);
    }
    if (is_zero(fp)) throw DegenerateCaseError("axis W expansion needs a rod with non-zero slope");
    return (f + f * f * vzz / (2 * fp * fp)) / rods.c;
}

double rod_midpoint(const RodData& rods, int rod_index) {
    const int n = static_cast<int>(rods.nuts.size());
    if (rod_index < 0 || rod_index > n) throw InvalidInput("rod index " + std::to_string(rod_index) + " out of range");
    return sample_point(rods, static_cast<std::size_t>(rod_index));
}

ConicalResult conical_check(const RodData& rods, int rod_index, std::vector<double> rho_samples, double scale) {
    const RodStructure s = rod_vectors(rods);
    const int n = static_cast<int>(rods.nuts.size());
    const double zeta = rod_midpoint(rods, rod_index);
    double length = data_scale(rods);
    if (rod_index > 0 && rod_index < n)
        length = rods.nuts[static_cast<std::size_t>(rod_index)].z - rods.nuts[static_cast<std::size_t>(rod_index - 1)].z;
    if (rho_samples.empty()) {
        const double h = 1e-2 * length;
        rho_samples = {h, h / 2, h / 4, h / 8};
    }
    const auto v = s.rod_vectors[static_cast<std::size_t>(rod_index)];
    ConicalResult r;
    for (double rho : rho_samples) {
        const MetricJet m = tod_metric(rods, rho, zeta, 1);
        Jet N(1);
        for (int a = 0; a < 2; ++a)
            for (int b = 0; b < 2; ++b) N += (scale * v[a]) * (scale * v[b]) * m.g[a][b];
        const double q = (N(1, 0) * N(1, 0) + N(0, 1) * N(0, 1)) / (4 * N.value() * m.g[2][2].value());
        r.rho.push_back(rho);
        r.raw.push_back(q);
    }
    // Neville at rho^2 = 0
    std::vector<double> P = r.raw;
    const std::size_t k = P.size();
    double prev = P.back();
    for (std::size_t m = 1; m < k; ++m) {
        prev = P[k - 1];
        for (std::size_t i = k - 1; i >= m; --i) {
            const double xi = r.rho[i] * r.rho[i], xj = r.rho[i - m] * r.rho[i - m];
            P[i] = (xj * P[i] - xi * P[i - 1]) / (xj - xi);
            if (i == m) break;
        }
    }
    r.limit = P[k - 1];
    r.converged = k < 2 || std::abs(r.limit - prev) < 1e-6 * std::max(1.0, std::abs(r.limit));
    return r;
}

}  // namespace todkit
