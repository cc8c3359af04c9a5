/*
 Copyright 2026 The netsched Authors

 Licensed under the Apache License, Version 2.0 (the "License");
 you may not use this file except in compliance with the License.
 You may obtain a copy of the License at

      https://www.apache.org/licenses/LICENSE-2.0

 Unless required by applicable law or agreed to in writing, software
 distributed under the License is distributed on an "AS IS" BASIS,
 WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 See the License for the specific language governing permissions and
 limitations under the License.
*/
#ifndef NETSCHED_PRESETS_HPP
#define NETSCHED_PRESETS_HPP

// Benchmark data: a discretised linearised batch reactor and a discretised
// linearised inverted pendulum (sampling time 0.05), together with published
// gains, certificate matrices, gain parameters Y and certificate residuals for
// the two-plant, capacity-one setting with c = ({1}, {2}), p = (1/2, 1/2).
// All digits are kept as published.

#include "netsched/certify.hpp"
#include "netsched/model.hpp"
#include "netsched/partition.hpp"

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace netsched::presets {

inline Matrix rows(std::initializer_list<std::initializer_list<double>> r) {
    const auto n = static_cast<Eigen::Index>(r.size());
    const auto m = static_cast<Eigen::Index>(r.begin()->size());
    Matrix out(n, m);
    Eigen::Index i = 0;
    for (const auto& row : r) {
        if (static_cast<Eigen::Index>(row.size()) != m) throw std::logic_error("ragged preset matrix");
        Eigen::Index j = 0;
        for (double x : row) out(i, j++) = x;
        ++i;
    }
    return out;
}

// clang-format off
inline Matrix batch_reactor_A() {
    return rows({{1.0795, -0.0045, 0.2896, -0.2367},
                 {-0.0272, 0.8101, -0.0032, 0.0323},
                 {0.0447, 0.1886, 0.7317, 0.2354},
                 {0.0010, 0.1888, 0.0545, 0.9115}});
}
inline Matrix batch_reactor_B() {
    return rows({{0.0006, -0.0239},
                 {0.2567, 0.0002},
                 {0.0837, -0.1346},
                 {0.0837, -0.0046}});
}
inline Matrix batch_reactor_K() {
    return rows({{0.0152761, -0.8159748, -0.2394377, -0.7514747},
                 {2.3245781, 0.0798596, 1.622477, -1.0654847}});
}
inline Matrix batch_reactor_P_s() {
    return rows({{974.82022, 115.25221, 693.51383, -223.88521},
                 {115.25221, 1022.0729, 160.38138, 109.95335},
                 {693.51383, 160.38138, 768.15463, -219.94088},
                 {-223.88521, 109.95335, -219.94088, 1250.1576}});
}
inline Matrix batch_reactor_P_u() {
    return rows({{1678.8234, 300.05968, 1271.4766, -378.75625},
                 {300.05968, 1465.4904, 391.07683, 368.29291},
                 {1271.4766, 391.07683, 1213.8238, -279.44358},
                 {-378.75625, 368.29291, -279.44358, 1483.7789}});
}
inline Matrix batch_reactor_Y() {
    return rows({{0.0005645, -0.0006647, -0.0008519, -0.0005914},
                 {0.0024236, -0.0001203, -0.0001764, -0.0004387}});
}
inline Matrix batch_reactor_R_s() {
    return rows({{-51.553004, -7.8596573, -69.500984, -13.199701},
                 {-7.8596573, -480.12758, -40.530729, 37.248709},
                 {-69.500984, -40.530729, -230.28674, 106.35376},
                 {-13.199701, 37.248709, 106.35376, -300.5394}});
}
inline Matrix batch_reactor_R_u() {
    return rows({{-48.482389, 0.1252562, -62.165288, -15.778984},
                 {0.1252562, -428.29213, -25.838462, 53.124646},
                 {-62.165288, -25.838462, -182.71532, 86.522247},
                 {-15.778984, 53.124646, 86.522247, -289.02844}});
}

inline Matrix pendulum_A() { return rows({{1.0123, 0.0502}, {0.4920, 1.0123}}); }
inline Matrix pendulum_B() { return rows({{0.0123}, {0.4920}}); }
inline Matrix pendulum_K() { return rows({{-2.3973087, -1.4308615}}); }
inline Matrix pendulum_P_s() { return rows({{1717.7113, 138.39564}, {138.39564, 50.218134}}); }
inline Matrix pendulum_P_u() { return rows({{2580.3612, 512.67656}, {512.67656, 184.31981}}); }
inline Matrix pendulum_Y() { return rows({{0.0011569, -0.0316812}}); }
inline Matrix pendulum_R_s() { return rows({{-26.390428, -3.0495068}, {-3.0495068, -30.242636}}); }
inline Matrix pendulum_R_u() { return rows({{-25.479355, -3.4282391}, {-3.4282391, -25.646787}}); }
// clang-format on

/// Published data for one plant of the two-plant benchmark.
struct PublishedPlant {
    PlantModel plant;
    StabilityCertificate certificate;
    Matrix Y;
    Matrix R_s;
    Matrix R_u;
};

inline PublishedPlant batch_reactor() {
    return {PlantModel{1, batch_reactor_A(), batch_reactor_B(), batch_reactor_K()},
            StabilityCertificate{Rational(1, 2), batch_reactor_P_s(), batch_reactor_P_u(), kDefaultKappa},
            batch_reactor_Y(), batch_reactor_R_s(), batch_reactor_R_u()};
}

inline PublishedPlant inverted_pendulum() {
    return {PlantModel{2, pendulum_A(), pendulum_B(), pendulum_K()},
            StabilityCertificate{Rational(1, 2), pendulum_P_s(), pendulum_P_u(), kDefaultKappa},
            pendulum_Y(), pendulum_R_s(), pendulum_R_u()};
}

inline ScheduleParameters experiment1_schedule() {
    return {Partition{{{1}, {2}}}, ProbabilityVector{{Rational(1, 2), Rational(1, 2)}}};
}

/// A named preset: plants, capacity, and whatever schedule/certificates are published for it.
struct Preset {
    std::string name;
    NcsConfig config;
    std::optional<ScheduleParameters> schedule;
    std::vector<std::pair<int, StabilityCertificate>> certificates;
};

inline const std::vector<std::string>& preset_names() {
    static const std::vector<std::string> names{"batch-reactor", "inverted-pendulum", "experiment1"};
    return names;
}

/**
 * batch-reactor / inverted-pendulum: the single plant (index 1) with its
 * published gain; capacity is left at 0 because a lone plant is not an NCS.
 * experiment1: both plants, M = 1, schedule and certificates as published.
 */
inline Preset preset(const std::string& name) {
    if (name == "batch-reactor") {
        auto p = batch_reactor();
        p.plant.index = 1;
        return {name, NcsConfig{{p.plant}, 0}, std::nullopt, {{1, p.certificate}}};
    }
    if (name == "inverted-pendulum") {
        auto p = inverted_pendulum();
        p.plant.index = 1;
        return {name, NcsConfig{{p.plant}, 0}, std::nullopt, {{1, p.certificate}}};
    }
    if (name == "experiment1") {
        auto r = batch_reactor();
        auto q = inverted_pendulum();
        return {name, NcsConfig{{r.plant, q.plant}, 1}, experiment1_schedule(), {{1, r.certificate}, {2, q.certificate}}};
    }
    throw std::invalid_argument("unknown preset \"" + name + "\"");
}

}  // namespace netsched::presets

#endif  // NETSCHED_PRESETS_HPP
