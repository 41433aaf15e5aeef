#include "ebm/model.hpp"

#include <cmath>
#include <sstream>

#include "ebm/errors.hpp"
#include "ebm/tensor.hpp"
#include "json_util.hpp"

namespace ebm {

double EBMModel::b() const {
    double sum = 0.0;
    for (const auto& e : elements) sum += 1.0 / e.eta;
    return sum;
}

std::vector<std::string> validate(const EBMModel& m) {
    std::vector<std::string> bad;
    if (m.n < 0) bad.push_back("n must be >= 0");
    if (static_cast<int>(m.elements.size()) != m.n + 1) {
        std::ostringstream ss;
        ss << "expected " << m.n + 1 << " elements, got " << m.elements.size();
        bad.push_back(ss.str());
        return bad; // element-wise checks below would index garbage
    }
    if (!(m.R > 0.0)) bad.push_back("ball radius R must be positive");

    double modulus_scale = 0.0;
    for (const auto& e : m.elements)
        modulus_scale = std::max({modulus_scale, std::abs(e.lambda), std::abs(e.mu)});
    if (modulus_scale <= 0.0) bad.push_back("all moduli are zero");
    // The strong convexity constant is existential in the model definition;
    // 1e-12 of the largest modulus separates "positive" from roundoff.
    double delta = 1e-12 * modulus_scale;

    for (size_t i = 0; i < m.elements.size(); ++i) {
        const auto& e = m.elements[i];
        std::ostringstream tag;
        tag << "element " << i << ": ";
        if (!(e.eta > 0.0)) bad.push_back(tag.str() + "nonpositive viscosity");
        if (modulus_scale > 0.0 && !check_strong_convexity(e.lambda, e.mu, delta))
            bad.push_back(tag.str() + "strong convexity violated (mu or 3*lambda+2*mu below threshold)");
    }
    return bad;
}

void require_valid(const EBMModel& m) {
    auto bad = validate(m);
    if (bad.empty()) return;
    std::string joined;
    for (const auto& s : bad) {
        if (!joined.empty()) joined += "; ";
        joined += s;
    }
    fail(errc::invalid_model, joined);
}

namespace {

// Shared assembly: the shear matrix uses 2*mu_i on the diagonal scale, the
// bulk one 3*lambda_i + 2*mu_i; off-diagonals couple element 0 to element i
// through eta_i with the geometric mean of the two diagonal scales.
DenseMatrix assemble_symmetrized(const EBMModel& m, ModeKind kind) {
    int order = m.n + 1;
    DenseMatrix a(order);
    auto scale = [&](int i) {
        const auto& e = m.elements[static_cast<size_t>(i)];
        return kind == ModeKind::shear ? 2.0 * e.mu : 3.0 * e.lambda + 2.0 * e.mu;
    };
    a(0, 0) = -m.b() * scale(0);
    for (int i = 1; i < order; ++i) {
        double inv_eta = 1.0 / m.elements[static_cast<size_t>(i)].eta;
        a(i, i) = -inv_eta * scale(i);
        double coupling = inv_eta * std::sqrt(scale(0) * scale(i));
        a(0, i) = a(i, 0) = coupling;
    }
    return a;
}

} // namespace

ModeMatrix assemble(const EBMModel& m, ModeKind kind) {
    require_valid(m);
    return {kind, assemble_symmetrized(m, kind)};
}

DenseMatrix assemble_unsymmetrized_shear(const EBMModel& m) {
    require_valid(m);
    int order = m.n + 1;
    DenseMatrix a(order);
    double mu0 = m.elements[0].mu;
    a(0, 0) = -2.0 * m.b() * mu0;
    for (int i = 1; i < order; ++i) {
        const auto& e = m.elements[static_cast<size_t>(i)];
        double inv_eta = 1.0 / e.eta;
        a(0, i) = inv_eta * 2.0 * e.mu;
        a(i, 0) = inv_eta * 2.0 * mu0;
        a(i, i) = -inv_eta * 2.0 * e.mu;
    }
    return a;
}

std::string model_to_json(const EBMModel& m) {
    nlohmann::json j;
    j["n"] = m.n;
    j["R"] = m.R;
    auto& arr = j["elements"] = nlohmann::json::array();
    for (const auto& e : m.elements)
        arr.push_back({{"lambda", e.lambda}, {"mu", e.mu}, {"eta", e.eta}});
    return detail::dump_17g(j);
}

EBMModel model_from_json(const std::string& text) {
    auto j = detail::parse_or_fail(text, "model");
    EBMModel m;
    try {
        m.n = j.at("n").get<int>();
        m.R = j.at("R").get<double>();
        for (const auto& e : j.at("elements")) {
            m.elements.push_back({e.at("lambda").get<double>(), e.at("mu").get<double>(),
                                  e.at("eta").get<double>()});
        }
    } catch (const nlohmann::json::exception& ex) {
        fail(errc::bad_input, std::string("model JSON schema: ") + ex.what());
    }
    return m;
}

} // namespace ebm
