#include "fracvar/cases.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace fracvar {

namespace {

constexpr double pi = std::numbers::pi;

ManufacturedCase make_manu_cd_1d() {
    // u* = e^{-t} sin(pi x) for u_t + u_x - 0.1 u_xx + 0.5 u = f
    CDCoefficients c;
    c.gamma = {1.0};
    c.K = {{0.1}};
    c.beta = 0.5;
    c.source = [](double t, const std::vector<double>& x) {
        const double e = std::exp(-t);
        return (-1.0 + 0.1 * pi * pi + 0.5) * e * std::sin(pi * x[0]) +
               pi * e * std::cos(pi * x[0]);
    };
    c.u0 = [](const std::vector<double>& x) { return std::sin(pi * x[0]); };
    return ManufacturedCase{
        "manu-cd-1d", c,
        [](double t, const std::vector<double>& x) {
            return std::exp(-t) * std::sin(pi * x[0]);
        },
        TimeGrid(0.0, 1.0, 64), BoxDomain({0.0}, {1.0}, {64})};
}

ManufacturedCase make_sep_sine() {
    // pure diffusion: u = e^{-0.1 pi^2 t} sin(pi x), f = 0
    CDCoefficients c;
    c.gamma = {0.0};
    c.K = {{0.1}};
    c.beta = 0.0;
    c.source = [](double, const std::vector<double>&) { return 0.0; };
    c.u0 = [](const std::vector<double>& x) { return std::sin(pi * x[0]); };
    return ManufacturedCase{
        "sep-sine", c,
        [](double t, const std::vector<double>& x) {
            return std::exp(-0.1 * pi * pi * t) * std::sin(pi * x[0]);
        },
        TimeGrid(0.0, 1.0, 64), BoxDomain({0.0}, {1.0}, {64})};
}

ManufacturedCase make_pure_time() {
    // u' + u/2 = cos t, u(0) = 1, no space coupling:
    // u = 0.4 cos t + 0.8 sin t + 0.6 e^{-t/2} at every node
    CDCoefficients c;
    c.gamma = {0.0};
    c.K = {{0.0}};
    c.beta = 0.5;
    c.source = [](double t, const std::vector<double>&) { return std::cos(t); };
    c.u0 = [](const std::vector<double>&) { return 1.0; };
    return ManufacturedCase{
        "pure-time", c,
        [](double t, const std::vector<double>&) {
            return 0.4 * std::cos(t) + 0.8 * std::sin(t) + 0.6 * std::exp(-0.5 * t);
        },
        TimeGrid(0.0, 1.0, 64), BoxDomain({0.0}, {1.0}, {64})};
}

ManufacturedCase make_affine_exact() {
    // u = (1+t)(1+x): affine in t and x, gamma = K = beta = 0, so the
    // implicit march reproduces it to roundoff at every node
    CDCoefficients c;
    c.gamma = {0.0};
    c.K = {{0.0}};
    c.beta = 0.0;
    c.source = [](double, const std::vector<double>& x) { return 1.0 + x[0]; };
    c.u0 = [](const std::vector<double>& x) { return 1.0 + x[0]; };
    return ManufacturedCase{
        "affine-exact", c,
        [](double t, const std::vector<double>& x) {
            return (1.0 + t) * (1.0 + x[0]);
        },
        TimeGrid(0.0, 1.0, 16), BoxDomain({0.0}, {1.0}, {16})};
}

ManufacturedCase make_zero() {
    CDCoefficients c;
    c.gamma = {0.0};
    c.K = {{0.1}};
    c.beta = 0.0;
    c.source = [](double, const std::vector<double>&) { return 0.0; };
    c.u0 = [](const std::vector<double>&) { return 0.0; };
    return ManufacturedCase{
        "zero", c, [](double, const std::vector<double>&) { return 0.0; },
        TimeGrid(0.0, 1.0, 32), BoxDomain({0.0}, {1.0}, {32})};
}

}  // namespace

std::vector<std::string> case_ids() {
    return {"manu-cd-1d", "sep-sine", "pure-time", "affine-exact", "zero"};
}

ManufacturedCase get_case(const std::string& id) {
    if (id == "manu-cd-1d") return make_manu_cd_1d();
    if (id == "sep-sine") return make_sep_sine();
    if (id == "pure-time") return make_pure_time();
    if (id == "affine-exact") return make_affine_exact();
    if (id == "zero") return make_zero();
    std::ostringstream msg;
    msg << "unknown case id '" << id << "'; registered:";
    for (const auto& k : case_ids()) msg << " " << k;
    throw std::invalid_argument(msg.str());
}

}  // namespace fracvar
