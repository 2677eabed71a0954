#include "esn/signals.hpp"

#include "esn/random.hpp"
#include "esn/serialization.hpp"

#include <ostream>

namespace esn {

Drive gaussian_drive(Index length, Index width, std::uint64_t seed)
{
    if (length < 1 || width < 1)
        throw std::invalid_argument("gaussian_drive: length and width must be >= 1");
    Drive d;
    d.seed = seed;
    d.distribution = "gaussian";
    d.samples.resize(length, width);
    Rng rng = make_rng(seed, Stream::drive);
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (Index t = 0; t < length; ++t)
        for (Index l = 0; l < width; ++l)
            d.samples(t, l) = gauss(rng);
    return d;
}

std::vector<Drive> perturbed_family(const Drive& reference, Index lag, std::span<const double> grid,
                                    Index channel)
{
    if (lag < 0 || lag >= reference.length())
        throw std::invalid_argument("perturbed_family: lag must satisfy 0 <= lag < T");
    if (channel < 0 || channel >= reference.width())
        throw std::invalid_argument("perturbed_family: channel out of range");
    // 1-based position T - lag is row T - lag - 1
    const Index row = reference.length() - lag - 1;
    std::vector<Drive> family;
    family.reserve(grid.size());
    for (double value : grid) {
        Drive d = reference;
        d.samples(row, channel) = value;
        d.distribution = reference.distribution + "+perturbed";
        family.push_back(std::move(d));
    }
    return family;
}

std::vector<double> linspace(double lo, double hi, int count)
{
    if (count < 1)
        throw std::invalid_argument("linspace: count must be >= 1");
    std::vector<double> out(static_cast<std::size_t>(count));
    if (count == 1) {
        out[0] = lo;
        return out;
    }
    const double h = (hi - lo) / (count - 1);
    for (int i = 0; i < count; ++i)
        out[static_cast<std::size_t>(i)] = lo + h * i;
    out.back() = hi;
    return out;
}

void write_drive_csv(std::ostream& out, const Drive& drive)
{
    out << "t";
    for (Index l = 0; l < drive.width(); ++l)
        out << ",u" << l;
    out << '\n';
    use_round_trip_doubles(out);
    for (Index t = 0; t < drive.length(); ++t) {
        out << (t + 1);
        for (Index l = 0; l < drive.width(); ++l)
            out << ',' << drive.samples(t, l);
        out << '\n';
    }
}

}  // namespace esn
