#include "aeroflex/config.hpp"

#include <fstream>
#include <stdexcept>

#include <json.hpp>

namespace aeroflex {

using nlohmann::json;

double theodorsen_T10(double ch) {
    return std::sqrt(1.0 - ch * ch) + std::acos(ch);
}

double theodorsen_T11(double ch) {
    return std::acos(ch) * (1.0 - 2.0 * ch) + std::sqrt(1.0 - ch * ch) * (2.0 - ch);
}

double theodorsen_T12(double ch) {
    return std::sqrt(1.0 - ch * ch) * (2.0 + ch) - std::acos(ch) * (2.0 * ch + 1.0);
}

namespace {

json vec3_to_json(const Vec3& v) { return json::array({v.x(), v.y(), v.z()}); }

Vec3 vec3_from_json(const json& j) {
    if (!j.is_array() || j.size() != 3)
        throw std::runtime_error("expected a 3-element array");
    return Vec3(j[0].get<double>(), j[1].get<double>(), j[2].get<double>());
}

} // namespace

AircraftConfig default_aircraft() {
    AircraftConfig cfg;
    cfg.name = "hale-demonstrator";
    cfg.span_m = 24.0;
    cfg.wing_area_m2 = 21.6;
    cfg.chord_m = 0.9;
    cfg.wing_root_offset_m = 0.3;
    cfg.wing_incidence_rad = deg2rad(-1.20);
    cfg.wing_root_position_m = Vec3(0.0, 0.3, -0.15);
    cfg.mass_kg = 227.0;

    const int n_el = 7;
    const double L = cfg.span_m / 2.0 - cfg.wing_root_offset_m; // 11.7 m beam
    const double b = cfg.chord_m / 2.0;

    // beam sections at the element boundaries, running mass tapering outboard
    for (int i = 0; i <= n_el; ++i) {
        const double x = L * double(i) / n_el;
        const double eta = x / L;
        BeamSection s;
        s.station_m = x;
        s.EI_Nm2 = 1.215e5;
        s.GJ_Nm2 = 8.0e3;
        s.mass_per_m_kg = 0.55 * (1.0 - 0.6 * eta);
        s.pitch_inertia_per_m_kgm = 0.020;
        cfg.beam_sections.push_back(s);
    }

    // one flap per free node, hinged at 75% chord; the elastic axis sits at
    // 20% chord so the hinge is 0.55 c aft of it
    for (int k = 1; k <= n_el; ++k) {
        FlapSpec f;
        f.node_index = k;
        f.mass_kg = 0.132;
        f.hinge_inertia_kgm2 = 0.00253;
        f.static_moment_kgm = 0.0149;
        f.hinge_stiffness_Nm = 60.0;
        f.hinge_damping_Nms = 0.5;
        f.hinge_offset_m = 0.55 * cfg.chord_m;
        cfg.flaps.push_back(f);
    }

    // 28 uniform strips per side; flap integrals for a hinge at 0.5 semichords
    const int n_strips = 28;
    const double ch = 0.5;
    for (int i = 0; i < n_strips; ++i) {
        StripAeroSpec s;
        s.width_m = L / n_strips;
        s.station_m = (i + 0.5) * s.width_m;
        s.semichord_m = b;
        s.ea_offset = -0.6;
        const double eta = s.station_m / L;
        s.CLa = 5.70 * std::pow(1.0 - eta * eta, 0.7);
        s.T10 = theodorsen_T10(ch);
        s.T11 = theodorsen_T11(ch);
        s.T12 = theodorsen_T12(ch);
        cfg.strips.push_back(s);
    }

    // fuselage lumped masses (positions balance the wing mass so the total
    // centre of mass is at the body origin and the inertia targets are met)
    cfg.fuselage_masses = {
        {"nose", 58.0, Vec3(1.95, 0.0, 0.02)},
        {"cabin", 120.25, Vec3(0.10, 0.0, -0.422)},
        {"aft", 22.0, Vec3(-2.798, 0.0, -0.10)},
        {"tail", 15.9, Vec3(-4.40, 0.0, -0.438)},
    };

    // tail surfaces: the normal picks the flow-angle measurement axis; the
    // lift acts opposite to it
    cfg.surfaces = {
        {"htail_right", Vec3(-4.5, 0.9, -0.1), Vec3(0, 0, 1), 1.2, 4.0,
         deg2rad(-3.26), 0.6, "elevator"},
        {"htail_left", Vec3(-4.5, -0.9, -0.1), Vec3(0, 0, 1), 1.2, 4.0,
         deg2rad(-3.26), 0.6, "elevator"},
        {"fin", Vec3(-4.3, 0.0, -0.6), Vec3(0, 1, 0), 1.1, 3.0, 0.0, -0.6,
         "rudder"},
    };

    cfg.CD0 = 0.0014;
    cfg.k_drag = 0.020;
    cfg.max_thrust_N = 1500.0;

    cfg.elevator = {0.02, deg2rad(20.0), 0.0};
    cfg.rudder = {0.02, deg2rad(20.0), 0.0};
    cfg.throttle = {0.2, 0.0, 0.0};
    cfg.flap_act = {0.02, deg2rad(30.0), 0.0};

    return cfg;
}

namespace {

json to_json(const AircraftConfig& c) {
    json j;
    j["schema_version"] = c.schema_version;
    j["name"] = c.name;
    j["geometry"] = {
        {"span_m", c.span_m},
        {"wing_area_m2", c.wing_area_m2},
        {"chord_m", c.chord_m},
        {"wing_root_offset_m", c.wing_root_offset_m},
        {"wing_incidence_rad", c.wing_incidence_rad},
        {"wing_root_position_m", vec3_to_json(c.wing_root_position_m)},
    };
    j["mass_kg"] = c.mass_kg;
    for (const auto& m : c.fuselage_masses)
        j["fuselage_masses"].push_back({{"name", m.name},
                                        {"mass_kg", m.mass_kg},
                                        {"position_m", vec3_to_json(m.position_m)}});
    for (const auto& s : c.beam_sections)
        j["beam_sections"].push_back({{"station_m", s.station_m},
                                      {"EI_Nm2", s.EI_Nm2},
                                      {"GJ_Nm2", s.GJ_Nm2},
                                      {"mass_per_m_kg", s.mass_per_m_kg},
                                      {"pitch_inertia_per_m_kgm", s.pitch_inertia_per_m_kgm}});
    for (const auto& f : c.flaps)
        j["flaps"].push_back({{"node_index", f.node_index},
                              {"mass_kg", f.mass_kg},
                              {"hinge_inertia_kgm2", f.hinge_inertia_kgm2},
                              {"static_moment_kgm", f.static_moment_kgm},
                              {"hinge_stiffness_Nm", f.hinge_stiffness_Nm},
                              {"hinge_damping_Nms", f.hinge_damping_Nms},
                              {"hinge_offset_m", f.hinge_offset_m}});
    for (const auto& s : c.strips)
        j["strips"].push_back({{"station_m", s.station_m},
                               {"width_m", s.width_m},
                               {"semichord_m", s.semichord_m},
                               {"ea_offset", s.ea_offset},
                               {"CLa", s.CLa},
                               {"T10", s.T10},
                               {"T11", s.T11},
                               {"T12", s.T12}});
    for (const auto& s : c.surfaces)
        j["surfaces"].push_back({{"name", s.name},
                                 {"position_m", vec3_to_json(s.position_m)},
                                 {"normal", vec3_to_json(s.normal)},
                                 {"area_m2", s.area_m2},
                                 {"CLa", s.CLa},
                                 {"incidence_rad", s.incidence_rad},
                                 {"control_gain", s.control_gain},
                                 {"control", s.control}});
    j["drag"] = {{"CD0", c.CD0}, {"k_drag", c.k_drag}};
    j["max_thrust_N"] = c.max_thrust_N;
    auto act = [](const ActuatorSpec& a) {
        return json{{"time_constant_s", a.time_constant_s},
                    {"limit_rad", a.limit_rad},
                    {"rate_limit", a.rate_limit}};
    };
    j["actuators"] = {{"elevator", act(c.elevator)},
                      {"rudder", act(c.rudder)},
                      {"throttle", act(c.throttle)},
                      {"flap", act(c.flap_act)}};
    const auto& ct = c.control;
    j["control"] = {
        {"K_Y", ct.K_Y},
        {"K_Z", ct.K_Z},
        {"K_chi", ct.K_chi},
        {"K_gamma_sigma", ct.K_gamma_sigma},
        {"disturbance_bound", ct.disturbance_bound},
        {"CLa_total", ct.CLa_total},
        {"K1", vec3_to_json(ct.K1)},
        {"K2", vec3_to_json(ct.K2)},
        {"K_s", vec3_to_json(ct.K_s)},
        {"gamma_s", ct.gamma_s},
        {"q_integral", ct.q_integral},
        {"q_elastic_rate", ct.q_elastic_rate},
        {"r_flap", ct.r_flap},
        {"bending_cap_Nm", ct.bending_cap_Nm},
        {"shear_filter_gain", ct.shear_filter_gain},
        {"shear_filter_tau_s", ct.shear_filter_tau_s},
        {"fast_loop_hz", ct.fast_loop_hz},
        {"slow_loop_hz", ct.slow_loop_hz},
    };
    return j;
}

AircraftConfig from_json(const json& j) {
    AircraftConfig c;
    c.schema_version = j.at("schema_version").get<int>();
    if (c.schema_version != 1)
        throw std::runtime_error("unsupported config schema version");
    c.name = j.value("name", "");
    const auto& g = j.at("geometry");
    c.span_m = g.at("span_m").get<double>();
    c.wing_area_m2 = g.at("wing_area_m2").get<double>();
    c.chord_m = g.at("chord_m").get<double>();
    c.wing_root_offset_m = g.at("wing_root_offset_m").get<double>();
    c.wing_incidence_rad = g.at("wing_incidence_rad").get<double>();
    c.wing_root_position_m = vec3_from_json(g.at("wing_root_position_m"));
    c.mass_kg = j.at("mass_kg").get<double>();
    for (const auto& m : j.value("fuselage_masses", json::array()))
        c.fuselage_masses.push_back({m.at("name").get<std::string>(),
                                     m.at("mass_kg").get<double>(),
                                     vec3_from_json(m.at("position_m"))});
    for (const auto& s : j.at("beam_sections"))
        c.beam_sections.push_back({s.at("station_m").get<double>(),
                                   s.at("EI_Nm2").get<double>(),
                                   s.at("GJ_Nm2").get<double>(),
                                   s.at("mass_per_m_kg").get<double>(),
                                   s.at("pitch_inertia_per_m_kgm").get<double>()});
    for (const auto& f : j.value("flaps", json::array()))
        c.flaps.push_back({f.at("node_index").get<int>(),
                           f.at("mass_kg").get<double>(),
                           f.at("hinge_inertia_kgm2").get<double>(),
                           f.at("static_moment_kgm").get<double>(),
                           f.at("hinge_stiffness_Nm").get<double>(),
                           f.at("hinge_damping_Nms").get<double>(),
                           f.at("hinge_offset_m").get<double>()});
    for (const auto& s : j.at("strips"))
        c.strips.push_back({s.at("station_m").get<double>(),
                            s.at("width_m").get<double>(),
                            s.at("semichord_m").get<double>(),
                            s.at("ea_offset").get<double>(),
                            s.at("CLa").get<double>(),
                            s.at("T10").get<double>(),
                            s.at("T11").get<double>(),
                            s.at("T12").get<double>()});
    for (const auto& s : j.value("surfaces", json::array()))
        c.surfaces.push_back({s.at("name").get<std::string>(),
                              vec3_from_json(s.at("position_m")),
                              vec3_from_json(s.at("normal")),
                              s.at("area_m2").get<double>(),
                              s.at("CLa").get<double>(),
                              s.at("incidence_rad").get<double>(),
                              s.at("control_gain").get<double>(),
                              s.value("control", "")});
    c.CD0 = j.at("drag").at("CD0").get<double>();
    c.k_drag = j.at("drag").at("k_drag").get<double>();
    c.max_thrust_N = j.at("max_thrust_N").get<double>();
    auto act = [](const json& a) {
        return ActuatorSpec{a.at("time_constant_s").get<double>(),
                            a.at("limit_rad").get<double>(),
                            a.value("rate_limit", 0.0)};
    };
    if (j.contains("actuators")) {
        c.elevator = act(j["actuators"].at("elevator"));
        c.rudder = act(j["actuators"].at("rudder"));
        c.throttle = act(j["actuators"].at("throttle"));
        c.flap_act = act(j["actuators"].at("flap"));
    }
    if (j.contains("control")) {
        const auto& ct = j["control"];
        auto& o = c.control;
        o.K_Y = ct.value("K_Y", o.K_Y);
        o.K_Z = ct.value("K_Z", o.K_Z);
        o.K_chi = ct.value("K_chi", o.K_chi);
        o.K_gamma_sigma = ct.value("K_gamma_sigma", o.K_gamma_sigma);
        o.disturbance_bound = ct.value("disturbance_bound", o.disturbance_bound);
        o.CLa_total = ct.value("CLa_total", o.CLa_total);
        if (ct.contains("K1")) o.K1 = vec3_from_json(ct["K1"]);
        if (ct.contains("K2")) o.K2 = vec3_from_json(ct["K2"]);
        if (ct.contains("K_s")) o.K_s = vec3_from_json(ct["K_s"]);
        o.gamma_s = ct.value("gamma_s", o.gamma_s);
        o.q_integral = ct.value("q_integral", o.q_integral);
        o.q_elastic_rate = ct.value("q_elastic_rate", o.q_elastic_rate);
        o.r_flap = ct.value("r_flap", o.r_flap);
        o.bending_cap_Nm = ct.value("bending_cap_Nm", o.bending_cap_Nm);
        o.shear_filter_gain = ct.value("shear_filter_gain", o.shear_filter_gain);
        o.shear_filter_tau_s = ct.value("shear_filter_tau_s", o.shear_filter_tau_s);
        o.fast_loop_hz = ct.value("fast_loop_hz", o.fast_loop_hz);
        o.slow_loop_hz = ct.value("slow_loop_hz", o.slow_loop_hz);
    }
    return c;
}

} // namespace

AircraftConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file: " + path);
    json j;
    in >> j;
    AircraftConfig cfg = from_json(j);
    validate_config(cfg);
    return cfg;
}

void save_config(const AircraftConfig& cfg, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write config file: " + path);
    out << to_json(cfg).dump(2) << "\n";
}

void validate_config(const AircraftConfig& cfg) {
    auto fail = [](const std::string& msg) {
        throw std::runtime_error("config validation: " + msg);
    };
    if (cfg.mass_kg <= 0.0) fail("mass must be positive");
    if (cfg.span_m <= 0.0 || cfg.chord_m <= 0.0 || cfg.wing_area_m2 <= 0.0)
        fail("geometry values must be positive");
    if (cfg.beam_sections.size() < 2) fail("need at least two beam sections");
    for (size_t i = 1; i < cfg.beam_sections.size(); ++i)
        if (cfg.beam_sections[i].station_m <= cfg.beam_sections[i - 1].station_m)
            fail("beam section stations must be strictly increasing");
    const double L = cfg.beam_sections.back().station_m;
    for (size_t i = 0; i < cfg.beam_sections.size(); ++i) {
        const auto& s = cfg.beam_sections[i];
        if (s.EI_Nm2 <= 0.0 || s.GJ_Nm2 <= 0.0 || s.mass_per_m_kg <= 0.0 ||
            s.pitch_inertia_per_m_kgm <= 0.0)
            fail("beam section " + std::to_string(i) +
                 " properties must be positive");
    }
    const int n_nodes = cfg.n_elements();
    if (int(cfg.flaps.size()) != n_nodes)
        fail("flap count must equal the number of free nodes (" +
             std::to_string(n_nodes) + "), got " +
             std::to_string(cfg.flaps.size()));
    for (const auto& f : cfg.flaps) {
        if (f.node_index < 1 || f.node_index > n_nodes)
            fail("flap node index out of range");
        if (f.mass_kg <= 0.0 || f.hinge_inertia_kgm2 <= 0.0)
            fail("flap inertia properties must be positive");
        if (f.hinge_inertia_kgm2 * f.mass_kg <= f.static_moment_kgm * f.static_moment_kgm)
            fail("flap static moment inconsistent with its mass and inertia");
    }
    if (cfg.strips.empty()) fail("strip list must not be empty");
    double prev = -1.0;
    for (const auto& s : cfg.strips) {
        if (s.station_m <= prev) fail("strip stations must be increasing");
        prev = s.station_m;
        if (s.station_m < 0.0 || s.station_m > L) fail("strip station outside the beam span");
        if (s.width_m <= 0.0 || s.semichord_m <= 0.0 || s.CLa <= 0.0)
            fail("strip aerodynamic properties must be positive");
        if (std::abs(s.ea_offset) >= 1.0) fail("elastic-axis offset must lie within the chord");
    }
    for (const auto& s : cfg.surfaces) {
        if (s.area_m2 <= 0.0 || s.CLa <= 0.0) fail("surface area and lift slope must be positive");
        if (std::abs(s.normal.norm() - 1.0) > 1e-9) fail("surface normal must be a unit vector");
    }
    if (cfg.CD0 < 0.0 || cfg.k_drag < 0.0) fail("drag polar coefficients must be non-negative");
    if (cfg.max_thrust_N <= 0.0) fail("max thrust must be positive");
    for (const ActuatorSpec* a : {&cfg.elevator, &cfg.rudder, &cfg.throttle, &cfg.flap_act})
        if (a->time_constant_s <= 0.0) fail("actuator time constants must be positive");
    if (cfg.control.fast_loop_hz <= 0.0 || cfg.control.slow_loop_hz <= 0.0)
        fail("loop rates must be positive");
}

} // namespace aeroflex
