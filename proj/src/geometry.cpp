#include "todkit/geometry.hpp"

#include <algorithm>

namespace todkit {

int MetricJet::order() const {
    int n = g[0][0].order();
    for (const auto& row : g)
        for (const auto& e : row) n = std::min(n, e.order());
    return n;
}

Mat4 MetricJet::values() const {
    Mat4 m{};
    for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b) m[a][b] = g[a][b].value();
    return m;
}

TwoFormJet::TwoFormJet(int order) : order_(order) { c_.fill(Jet(order)); }

int TwoFormJet::slot(int a, int b) {
    static constexpr int idx[4][4] = {{-1, 0, 1, 2}, {0, -1, 3, 4}, {1, 3, -1, 5}, {2, 4, 5, -1}};
    return idx[a][b];
}

Jet TwoFormJet::operator()(int a, int b) const {
    if (a == b) return Jet(order_);
    const Jet& v = c_[static_cast<std::size_t>(slot(a, b))];
    return a < b ? v : -v;
}

void TwoFormJet::set(int a, int b, const Jet& v) {
    if (a == b) return;
    Jet w = v.truncated(order_);
    if (w.order() < order_) {
        order_ = w.order();
        for (auto& e : c_) e = e.truncated(order_);
    }
    c_[static_cast<std::size_t>(slot(a, b))] = a < b ? w : -w;
}

Mat4 TwoFormJet::values() const {
    Mat4 m{};
    for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b) m[a][b] = (*this)(a, b).value();
    return m;
}

TwoFormJet& TwoFormJet::operator+=(const TwoFormJet& o) {
    const int n = std::min(order_, o.order_);
    for (std::size_t k = 0; k < 6; ++k) c_[k] = c_[k].truncated(n) + o.c_[k].truncated(n);
    order_ = n;
    return *this;
}

TwoFormJet& TwoFormJet::operator*=(double s) {
    for (auto& e : c_) e *= s;
    return *this;
}

TwoFormJet operator*(const Jet& f, const TwoFormJet& a) {
    TwoFormJet r(std::min(f.order(), a.order()));
    for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j) r.set(i, j, f * a(i, j));
    return r;
}

TwoFormJet wedge(const std::array<Jet, 4>& alpha, const std::array<Jet, 4>& beta) {
    int n = alpha[0].order();
    for (int i = 0; i < 4; ++i) n = std::min({n, alpha[i].order(), beta[i].order()});
    TwoFormJet r(n);
    for (int a = 0; a < 4; ++a)
        for (int b = a + 1; b < 4; ++b) r.set(a, b, alpha[a] * beta[b] - alpha[b] * beta[a]);
    return r;
}

namespace {

// Jacobian d(old)/d(new) as jets: rows old index 0..3, cols new index 0..3
std::array<std::array<Jet, 4>, 4> jacobian(const Mat2& killing, const Jet& s, const Jet& t) {
    const int n = std::min(s.order(), t.order()) - 1;
    std::array<std::array<Jet, 4>, 4> J;
    for (auto& row : J) row.fill(Jet(n));
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) J[a][b] = Jet::constant(killing[a][b], n);
    J[2][2] = s.derivative(0);
    J[2][3] = s.derivative(1);
    J[3][2] = t.derivative(0);
    J[3][3] = t.derivative(1);
    return J;
}

}  // namespace

MetricJet pullback(const MetricJet& g, const Mat2& killing, const Jet& s, const Jet& t,
                   const std::array<std::string, 4>& labels, std::array<double, 2> new_base) {
    const auto J = jacobian(killing, s, t);
    const int n = J[0][0].order();
    std::array<std::array<Jet, 4>, 4> old;
    for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b) old[a][b] = compose(g.g[a][b], s, t).truncated(n);
    MetricJet r;
    r.labels = labels;
    r.base = new_base;
    for (int i = 0; i < 4; ++i)
        for (int j = i; j < 4; ++j) {
            Jet acc(n);
            for (int a = 0; a < 4; ++a)
                for (int b = 0; b < 4; ++b) acc += J[a][i] * J[b][j] * old[a][b];
            r.g[i][j] = acc;
            r.g[j][i] = acc;
        }
    return r;
}

TwoFormJet pullback(const TwoFormJet& w, const Mat2& killing, const Jet& s, const Jet& t) {
    const auto J = jacobian(killing, s, t);
    const int n = std::min(J[0][0].order(), w.order());
    TwoFormJet r(n);
    for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j) {
            Jet acc(n);
            for (int a = 0; a < 4; ++a)
                for (int b = 0; b < 4; ++b) {
                    if (a == b) continue;
                    acc += J[a][i] * J[b][j] * compose(w(a, b), s, t).truncated(n);
                }
            r.set(i, j, acc);
        }
    return r;
}

}  // namespace todkit
