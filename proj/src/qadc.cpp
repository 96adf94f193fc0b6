// Copyright 2026 The qknn-sim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#include "qknn/qadc.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace qknn {

namespace {

void require_fresh(const StateVector &s, const std::vector<Qubit> &qs,
                   const char *what) {
    if (qs.empty()) {
        return;
    }
    const auto p = measure_probs(s, qs);
    if (1.0 - p[0] > 1e-12) {
        throw ValidationError(std::string(what) + ": register is not fresh");
    }
}

std::vector<Qubit> concat(std::initializer_list<std::vector<Qubit>> parts) {
    std::vector<Qubit> out;
    for (const auto &p : parts) {
        out.insert(out.end(), p.begin(), p.end());
    }
    return out;
}

} // namespace

void PrecisionConfig::validate(std::size_t lo, std::size_t hi) const {
    if (b < lo || b > hi) {
        throw ValidationError("precision b=" + std::to_string(b) +
                              " outside [" + std::to_string(lo) + ", " +
                              std::to_string(hi) + "]");
    }
}

std::uint64_t quantize_unit(double value, std::size_t b) {
    const double top = std::ldexp(1.0, static_cast<int>(b)) - 1.0;
    const double scaled =
        std::nearbyint(std::max(value, 0.0) * std::ldexp(1.0, static_cast<int>(b)));
    return static_cast<std::uint64_t>(std::min(scaled, top));
}

std::uint64_t encode_similarity(double value, std::size_t b, Encoding enc) {
    switch (enc) {
    case Encoding::Fidelity:
        return quantize_unit(value, b);
    case Encoding::DotOffset:
        return quantize_unit((value + 1.0) / 2.0, b);
    case Encoding::Amplitude:
        return quantize_unit(std::abs(value), b);
    }
    return 0;
}

double decode_similarity(std::uint64_t code, std::size_t b, Encoding enc) {
    const double v = std::ldexp(static_cast<double>(code), -static_cast<int>(b));
    return enc == Encoding::DotOffset ? 2.0 * v - 1.0 : v;
}

std::uint64_t arithmetic_code(std::uint64_t t, std::size_t b, Encoding enc) {
    const std::uint64_t n = std::uint64_t{1} << b;
    t %= n;
    const std::uint64_t folded = std::min(t, n - t);
    const double s = std::sin(std::numbers::pi * static_cast<double>(folded) /
                              static_cast<double>(n));
    const double s2 = s * s;
    switch (enc) {
    case Encoding::Fidelity:
        return quantize_unit(2.0 * s2 - 1.0, b);
    case Encoding::DotOffset:
        return quantize_unit(s2, b);
    case Encoding::Amplitude:
        return quantize_unit(std::sqrt(std::max(2.0 * s2 - 1.0, 0.0)), b);
    }
    return 0;
}

Gate arithmetic_map(const std::vector<Qubit> &phase,
                    const std::vector<Qubit> &out, std::size_t b, Encoding enc) {
    if (phase.size() != b || out.size() != b) {
        throw ValidationError("arithmetic map: registers must have b qubits");
    }
    const std::uint64_t n = std::uint64_t{1} << b;
    std::vector<std::uint64_t> table(n * n);
    for (std::uint64_t f = 0; f < n; ++f) {
        for (std::uint64_t t = 0; t < n; ++t) {
            table[t | (f << b)] = t | ((f ^ arithmetic_code(t, b, enc)) << b);
        }
    }
    std::vector<Qubit> targets = phase;
    targets.insert(targets.end(), out.begin(), out.end());
    return make_permutation("ARITH", std::move(targets), std::move(table));
}

RegisterLayout fidelity_qadc_layout(std::size_t m, std::size_t n, std::size_t b) {
    RegisterLayout l;
    l.add("index", m);
    l.add("train", n);
    l.add("test", n);
    l.add("B", 1);
    l.add("phase", b);
    l.add("fid", b);
    return l;
}

FidelityQadcWires fidelity_qadc_wires(const RegisterLayout &l) {
    FidelityQadcWires w;
    w.amp.index = l.get("index").qubits();
    w.amp.train = l.get("train").qubits();
    w.amp.test = l.get("test").qubits();
    w.amp.b = l.get("B").start;
    w.phase = l.get("phase").qubits();
    w.out = l.get("fid").qubits();
    return w;
}

RegisterLayout dot_qadc_layout(std::size_t m, std::size_t n, std::size_t b) {
    RegisterLayout l;
    l.add("index", m);
    l.add("data", n);
    l.add("B", 1);
    l.add("phase", b);
    l.add("dp", b);
    return l;
}

DotQadcWires dot_qadc_wires(const RegisterLayout &l) {
    DotQadcWires w;
    w.amp.index = l.get("index").qubits();
    w.amp.data = l.get("data").qubits();
    w.amp.b = l.get("B").start;
    w.phase = l.get("phase").qubits();
    w.out = l.get("dp").qubits();
    return w;
}

Circuit build_E_dig(const StatePrep &v, const TrainPrep &tr,
                    const FidelityQadcWires &w, const PrecisionConfig &cfg,
                    Encoding enc) {
    const Circuit est = qpe(build_G(v, tr, w.amp), w.phase);
    Circuit c = est;
    c.add(arithmetic_map(w.phase, w.out, cfg.b, enc));
    c.append(est.inverse());
    c.append(build_E_amp(v, tr, w.amp).inverse());
    return c;
}

Circuit build_F(const StatePrep &v, const TrainPrep &tr,
                const FidelityQadcWires &w, const PrecisionConfig &cfg,
                Encoding enc) {
    Circuit c = build_E_amp(v, tr, w.amp);
    c.append(build_E_dig(v, tr, w, cfg, enc));
    return c;
}

Circuit build_X_dot(const StatePrep &v, const TrainPrep &tr,
                    const DotQadcWires &w, const PrecisionConfig &cfg) {
    const Circuit amp = build_V_dot(v, tr, w.amp);
    const Circuit est = qpe(build_H_dot(v, tr, w.amp), w.phase);
    Circuit c = amp;
    c.append(est);
    c.add(arithmetic_map(w.phase, w.out, cfg.b, Encoding::DotOffset));
    c.append(est.inverse());
    c.append(amp.inverse());
    return c;
}

std::uint64_t prep_calls_per_conversion(std::size_t b, Similarity kind) {
    const std::uint64_t n = std::uint64_t{1} << b;
    return kind == Similarity::Fidelity ? 8 * n - 4 : 12 * n - 6;
}

StateVector apply_E_amp(const StateVector &state, const StatePrep &v,
                        const TrainPrep &tr, const FidelityQadcWires &w) {
    require_fresh(state, concat({w.amp.train, w.amp.test, {w.amp.b}}),
                  "amplitude encoding");
    StateVector out = state;
    out.apply(build_E_amp(v, tr, w.amp));
    return out;
}

StateVector apply_E_dig(const StateVector &state, const StatePrep &v,
                        const TrainPrep &tr, const FidelityQadcWires &w,
                        const PrecisionConfig &cfg) {
    require_fresh(state, concat({w.phase, w.out}), "digitization");
    StateVector out = state;
    out.apply(build_E_dig(v, tr, w, cfg));
    return out;
}

StateVector apply_F(const StateVector &state, const StatePrep &v,
                    const TrainPrep &tr, const FidelityQadcWires &w,
                    const PrecisionConfig &cfg) {
    return apply_E_dig(apply_E_amp(state, v, tr, w), v, tr, w, cfg);
}

StateVector apply_X_dot(const StateVector &state, const StatePrep &v,
                        const TrainPrep &tr, const DotQadcWires &w,
                        const PrecisionConfig &cfg) {
    const double tol = 1e-12;
    auto real_only = [tol](const State &s) {
        return std::all_of(s.begin(), s.end(),
                           [tol](const Complex &c) { return std::abs(c.imag()) <= tol; });
    };
    if (!real_only(v.state()) ||
        !std::all_of(tr.states().begin(), tr.states().end(), real_only)) {
        throw ValidationError("dot-product conversion requires real amplitudes");
    }
    require_fresh(state, concat({w.amp.data, {w.amp.b}, w.phase, w.out}),
                  "dot-product conversion");
    StateVector out = state;
    out.apply(build_X_dot(v, tr, w, cfg));
    return out;
}

std::vector<std::vector<double>> conditional_probs(const StateVector &state,
                                                   const std::vector<Qubit> &cond,
                                                   const std::vector<Qubit> &out) {
    std::vector<Qubit> joint = out;
    joint.insert(joint.end(), cond.begin(), cond.end());
    const auto p = measure_probs(state, joint);
    const std::size_t no = std::size_t{1} << out.size();
    const std::size_t nc = std::size_t{1} << cond.size();
    std::vector<std::vector<double>> rows(nc, std::vector<double>(no, 0.0));
    for (std::size_t j = 0; j < nc; ++j) {
        double tot = 0.0;
        for (std::size_t c = 0; c < no; ++c) {
            tot += p[c + no * j];
        }
        for (std::size_t c = 0; c < no && tot > 0.0; ++c) {
            rows[j][c] = p[c + no * j] / tot;
        }
    }
    return rows;
}

AbsQadcResult abs_qadc(const State &c, const PrecisionConfig &cfg) {
    cfg.validate(1, 8);
    const StatePrep v(c);
    const std::size_t n = v.num_qubits();
    std::vector<State> basis;
    for (std::size_t i = 0; i < c.size(); ++i) {
        State e(c.size());
        e[i] = 1.0;
        basis.push_back(std::move(e));
    }
    const TrainPrep tr(std::move(basis));
    const std::size_t m = tr.index_qubits();
    const RegisterLayout layout = fidelity_qadc_layout(m, n, cfg.b);
    const auto w = fidelity_qadc_wires(layout);

    StateVector s(layout);
    for (const auto q : w.amp.index) {
        s.apply(gates::h(q));
    }
    s.apply(build_F(v, tr, w, cfg, Encoding::Amplitude));
    auto probs = conditional_probs(s, w.amp.index, w.out);
    return AbsQadcResult{std::move(s), std::move(probs)};
}

} // namespace qknn
