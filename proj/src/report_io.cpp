#include "varlp/report_io.hpp"

#include <cmath>

namespace varlp {

Json json_number(double x)
{
    if (std::isfinite(x)) return x;
    return format_number(x);
}

Json to_json(const GeometryReport& r)
{
    return Json{{"doubling_constant", json_number(r.doubling_constant)},
                {"ahlfors_Q", json_number(r.ahlfors_Q)},
                {"ahlfors_c_lower", json_number(r.ahlfors_c_lower)},
                {"ahlfors_c_upper", json_number(r.ahlfors_c_upper)},
                {"ball_family_size", r.ball_family_size}};
}

Json to_json(const RegularityReport& r)
{
    return Json{{"K0", json_number(r.K0)},           {"K_inf", json_number(r.K_inf)},
                {"p_inf", json_number(r.p_inf)},     {"base_point", json_number(r.base_point)},
                {"in_LH0", r.in_LH0},                {"in_LHinf", r.in_LHinf}};
}

Json to_json(const CompatibilityReport& r)
{
    Json balls = Json::array();
    for (const BallCompatibility& b : r.per_ball) {
        balls.push_back(Json{{"center", json_number(b.ball.center)},
                             {"radius", json_number(b.ball.radius)},
                             {"p_plus_ball", json_number(b.p_plus_ball)},
                             {"p_plus_preimage", json_number(b.p_plus_pre)},
                             {"p_minus_ball", json_number(b.p_minus_ball)},
                             {"p_minus_preimage", json_number(b.p_minus_pre)}});
    }
    return Json{{"bracket_plus", json_number(r.bracket_plus)},
                {"bracket_minus", json_number(r.bracket_minus)},
                {"family_size", r.family_size},
                {"skipped", r.skipped},
                {"in_P_phi_plus", r.in_P_phi_plus},
                {"in_P_phi_minus", r.in_P_phi_minus},
                {"bracket_plus_le_one", r.bracket_plus_le_one},
                {"regularity", to_json(r.regularity)},
                {"per_ball", std::move(balls)}};
}

Json to_json(const PushforwardProfile& r)
{
    Json u = Json::array();
    for (double v : r.u_values) u.push_back(json_number(v));
    Json j{{"u_sup", json_number(r.u_sup)},
           {"method", r.method == ProfileMethod::analytic ? "analytic" : "empirical"},
           {"n_cells", r.space.n_cells()},
           {"lo", json_number(r.space.lo())},
           {"hi", json_number(r.space.hi())},
           {"u_values", std::move(u)}};
    j["u_p_sup"] = r.u_p_sup ? json_number(*r.u_p_sup) : Json(nullptr);
    j["cal_U"] = r.cal_U ? json_number(*r.cal_U) : Json(nullptr);
    return j;
}

Json to_json(const OperatorNormReport& r)
{
    return Json{{"upper_bound", json_number(r.upper_bound)},
                {"lower_bound", json_number(r.lower_bound)},
                {"witness", r.witness},
                {"family_size", r.family_size}};
}

Json to_json(const DiagnosticReport& r)
{
    Json params = Json::object();
    for (const auto& [k, v] : r.parameters) params[k] = json_number(v);
    Json series = Json::array();
    for (const auto& row : r.series) {
        Json jr = Json::array();
        for (double v : row) jr.push_back(json_number(v));
        series.push_back(std::move(jr));
    }
    return Json{{"probe_name", r.probe_name},
                {"parameters", std::move(params)},
                {"columns", r.columns},
                {"series", std::move(series)},
                {"verdict", to_string(r.verdict)},
                {"verdict_label", r.verdict_label},
                {"key_name", r.key_name},
                {"key_value", json_number(r.key_value)},
                {"notes", r.notes}};
}

std::string csv_field(const std::string& s)
{
    if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

void write_csv_row(std::ostream& out, std::span<const std::string> fields)
{
    for (std::size_t k = 0; k < fields.size(); ++k) {
        if (k > 0) out << ',';
        out << csv_field(fields[k]);
    }
    out << '\n';
}

void write_csv(std::ostream& out, std::span<const std::string> columns, std::span<const std::vector<double>> rows)
{
    write_csv_row(out, columns);
    std::vector<std::string> fields;
    for (const auto& row : rows) {
        fields.clear();
        for (double v : row) fields.push_back(format_number(v));
        write_csv_row(out, fields);
    }
}

} // namespace varlp
