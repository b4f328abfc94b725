#include <cstdio>
#include <stdexcept>

#include "doctest.h"

#include "aeroflex/config.hpp"

using namespace aeroflex;

TEST_CASE("default aircraft aggregates") {
    const AircraftConfig cfg = default_aircraft();
    CHECK(cfg.mass_kg == doctest::Approx(227.0));
    CHECK(cfg.span_m * cfg.span_m / cfg.wing_area_m2 ==
          doctest::Approx(26.67).epsilon(0.001));
    CHECK(cfg.flaps.size() == 7);
    CHECK(cfg.strips.size() == 28);
    CHECK(cfg.n_elements() == 7);
    for (const auto& s : cfg.strips) {
        CHECK(s.semichord_m > 0.0);
        CHECK(s.ea_offset > -1.0);
        CHECK(s.ea_offset < 1.0);
        CHECK(s.CLa > 0.0);
        CHECK(s.CLa <= 2.0 * kPi * 1.2);
    }
    CHECK_NOTHROW(validate_config(cfg));
}

TEST_CASE("default actuator constants") {
    const AircraftConfig cfg = default_aircraft();
    CHECK(cfg.elevator.time_constant_s == doctest::Approx(0.02));
    CHECK(cfg.rudder.time_constant_s == doctest::Approx(0.02));
    CHECK(cfg.elevator.limit_rad == doctest::Approx(deg2rad(20.0)));
    CHECK(cfg.rudder.limit_rad == doctest::Approx(deg2rad(20.0)));
    CHECK(cfg.throttle.time_constant_s == doctest::Approx(0.2));
    CHECK(cfg.flap_act.limit_rad == doctest::Approx(deg2rad(30.0)));
}

TEST_CASE("validation rejects bad sections") {
    AircraftConfig cfg = default_aircraft();
    cfg.beam_sections[2].EI_Nm2 = 0.0;
    bool threw = false;
    try {
        validate_config(cfg);
    } catch (const std::runtime_error& e) {
        threw = true;
        CHECK(std::string(e.what()).find("beam section") != std::string::npos);
    }
    CHECK(threw);
}

TEST_CASE("validation rejects wrong flap count") {
    AircraftConfig cfg = default_aircraft();
    cfg.flaps.pop_back(); // 6 flaps
    bool threw = false;
    try {
        validate_config(cfg);
    } catch (const std::runtime_error& e) {
        threw = true;
        CHECK(std::string(e.what()).find("flap count") != std::string::npos);
    }
    CHECK(threw);
}

TEST_CASE("validation catches random invariant violations") {
    for (int k = 0; k < 8; ++k) {
        AircraftConfig cfg = default_aircraft();
        switch (k % 4) {
            case 0: cfg.mass_kg = -1.0; break;
            case 1: cfg.beam_sections[k % 7].GJ_Nm2 = -2.0; break;
            case 2: cfg.strips[k].semichord_m = 0.0; break;
            case 3: cfg.beam_sections[3].station_m =
                        cfg.beam_sections[2].station_m; break;
        }
        CHECK_THROWS(validate_config(cfg));
    }
}

TEST_CASE("config round trip") {
    const AircraftConfig cfg = default_aircraft();
    const std::string path = "roundtrip_config.json";
    save_config(cfg, path);
    const AircraftConfig back = load_config(path);
    CHECK(back.mass_kg == cfg.mass_kg);
    CHECK(back.beam_sections.size() == cfg.beam_sections.size());
    for (size_t i = 0; i < cfg.beam_sections.size(); ++i) {
        CHECK(back.beam_sections[i].EI_Nm2 == cfg.beam_sections[i].EI_Nm2);
        CHECK(back.beam_sections[i].station_m == cfg.beam_sections[i].station_m);
    }
    for (size_t i = 0; i < cfg.strips.size(); ++i) {
        CHECK(back.strips[i].T10 == cfg.strips[i].T10);
        CHECK(back.strips[i].CLa == cfg.strips[i].CLa);
    }
    CHECK(back.surfaces.size() == cfg.surfaces.size());
    CHECK(back.wing_incidence_rad == cfg.wing_incidence_rad);
    std::remove(path.c_str());
}

TEST_CASE("flap hinge coefficients closed forms") {
    // hinge at mid semichord: T10 = sqrt(1-c^2) + acos(c)
    const double c = 0.5;
    CHECK(theodorsen_T10(c) ==
          doctest::Approx(std::sqrt(0.75) + std::acos(0.5)).epsilon(1e-12));
    CHECK(theodorsen_T10(c) == doctest::Approx(1.91322295).epsilon(1e-6));
    CHECK(theodorsen_T11(c) > 0.0);
    CHECK(theodorsen_T12(c) > 0.0);
}
