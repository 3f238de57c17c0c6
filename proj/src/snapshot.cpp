#include "mkg/snapshot.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <stdexcept>
#include <vector>

namespace mkg
{

namespace
{

template <class T>
T to_le(T v)
{
    if constexpr (std::endian::native == std::endian::little)
        return v;
    unsigned char b[sizeof(T)];
    std::memcpy(b, &v, sizeof(T));
    for (std::size_t i = 0; i < sizeof(T) / 2; ++i)
        std::swap(b[i], b[sizeof(T) - 1 - i]);
    std::memcpy(&v, b, sizeof(T));
    return v;
}

template <class T>
void put(std::ostream& os, T v)
{
    v = to_le(v);
    os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <class T>
T get(std::istream& is)
{
    T v;
    is.read(reinterpret_cast<char*>(&v), sizeof(T));
    if (!is)
        throw std::runtime_error("snapshot: truncated file");
    return to_le(v);
}

std::vector<const ScalarField*> components(const GaugeState& st)
{
    return {&st.A0, &st.A0_t, &st.A[0], &st.A[1], &st.A[2], &st.A_t[0], &st.A_t[1], &st.A_t[2], &st.phi, &st.phi_t};
}

} // namespace

void write_snapshot(const std::string& path, const GaugeState& st)
{
    std::ofstream os(path, std::ios::binary);
    if (!os)
        throw std::runtime_error("snapshot: cannot open " + path);
    const Grid& g = st.grid();
    os.write("MKG1", 4);
    put<std::uint32_t>(os, static_cast<std::uint32_t>(g.n()));
    put<double>(os, g.box());
    put<double>(os, st.time);
    put<std::uint8_t>(os, snapshot_layout_full);
    for (const ScalarField* f : components(st))
    {
        const CVector x = f->samples();
        for (const Complex& z : x)
        {
            put<double>(os, z.real());
            put<double>(os, z.imag());
        }
    }
    if (!os)
        throw std::runtime_error("snapshot: write failed for " + path);
}

GaugeState read_snapshot(const std::string& path)
{
    std::ifstream is(path, std::ios::binary);
    if (!is)
        throw std::runtime_error("snapshot: cannot open " + path);
    char magic[4];
    is.read(magic, 4);
    if (!is || std::memcmp(magic, "MKG1", 4) != 0)
        throw std::runtime_error("snapshot: bad magic in " + path);
    const auto n = get<std::uint32_t>(is);
    const double L = get<double>(is);
    const double t = get<double>(is);
    if (get<std::uint8_t>(is) != snapshot_layout_full)
        throw std::runtime_error("snapshot: unknown component layout");
    const Grid g(static_cast<int>(n), L);
    GaugeState st(g);
    st.time = t;
    std::vector<ScalarField*> comps = {&st.A0, &st.A0_t, &st.A[0], &st.A[1], &st.A[2],
                                       &st.A_t[0], &st.A_t[1], &st.A_t[2], &st.phi, &st.phi_t};
    for (ScalarField* f : comps)
    {
        CVector x(g.size());
        for (auto& z : x)
        {
            const double re = get<double>(is);
            const double im = get<double>(is);
            z = Complex(re, im);
        }
        *f = ScalarField::from_samples(g, std::move(x));
    }
    return st;
}

} // namespace mkg
