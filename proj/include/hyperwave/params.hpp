#pragma once

namespace hyperwave {

// Equivariance parameters: rotation speed in t, rotation number and field
// drift in α, and the log coefficient of the scalar field.
struct WaveParameters {
    double mu = 0.0;
    double k = 0.0;
    double c = 0.0;
    double b = 0.0;

    friend bool operator==(const WaveParameters&, const WaveParameters&) = default;
};

}  // namespace hyperwave
