#include "frozenperc/field.hpp"

#include <stdexcept>
#include <string>

#include "binary_io.hpp"

namespace frozenperc {

namespace {

constexpr char kFieldMagic[5] = "FPTF";
constexpr std::uint32_t kFieldVersion = 1;

}  // namespace

std::uint64_t mix64(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

std::uint64_t replica_seed(std::uint64_t base_seed, std::uint64_t index) noexcept {
    return mix64(mix64(base_seed ^ 0x6a09e667f3bcc909ULL) + index * 0x9e3779b97f4a7c15ULL);
}

double tau_at(std::uint64_t seed, Coord v) noexcept {
    const std::uint64_t packed = (static_cast<std::uint64_t>(static_cast<std::uint32_t>(v.x)) << 32) |
                                 static_cast<std::uint64_t>(static_cast<std::uint32_t>(v.y));
    const std::uint64_t h = mix64(mix64(packed ^ mix64(seed)) + seed * 0x9e3779b97f4a7c15ULL);
    return static_cast<double>(h >> 11) * 0x1.0p-53;
}

TauField::TauField(std::shared_ptr<const SiteIndex> sites, std::uint64_t seed)
    : sites_(std::move(sites)), seed_(seed) {
    values_.resize(sites_->size());
    const auto coords = sites_->sites();
    for (std::size_t i = 0; i < coords.size(); ++i) values_[i] = tau_at(seed_, coords[i]);
}

TauField::TauField(std::shared_ptr<const SiteIndex> sites, std::uint64_t seed,
                   std::vector<double> values)
    : sites_(std::move(sites)), seed_(seed), values_(std::move(values)) {}

TauField TauField::sample(const Region& domain, std::uint64_t seed) {
    return TauField(std::make_shared<const SiteIndex>(domain), seed);
}

TauField TauField::lazy(std::shared_ptr<const SiteIndex> sites, std::uint64_t seed) {
    return TauField(std::move(sites), seed, {});
}

double TauField::tau(Coord v) const {
    const std::int32_t i = sites_->index_of(v);
    if (i < 0) {
        throw std::out_of_range("site (" + std::to_string(v.x) + ", " + std::to_string(v.y) +
                                ") is outside the sampled domain");
    }
    return tau(static_cast<std::size_t>(i));
}

Color TauField::color_at(double p, Coord v) const {
    return is_black(tau(v), p) ? Color::black : Color::white;
}

TauField TauField::from_values(std::shared_ptr<const SiteIndex> sites, std::vector<double> values,
                               std::uint64_t seed) {
    if (values.size() != sites->size()) throw std::invalid_argument("one tau value per site expected");
    for (double v : values) {
        if (!(v >= 0.0 && v <= 1.0)) throw std::invalid_argument("tau values must lie in [0, 1]");
    }
    return TauField(std::move(sites), seed, std::move(values));
}

void TauField::save(std::ostream& out) const {
    detail::write_magic(out, kFieldMagic);
    detail::write_le<std::uint32_t>(out, kFieldVersion);
    detail::write_le<std::uint64_t>(out, seed_);
    detail::write_region(out, domain());
    detail::write_le<std::uint64_t>(out, sites_->size());
    for (std::size_t i = 0; i < sites_->size(); ++i) detail::write_f64(out, tau(i));
    if (!out) throw std::runtime_error("failed to write tau field");
}

TauField TauField::load(std::istream& in) {
    detail::expect_magic(in, kFieldMagic);
    const auto version = detail::read_le<std::uint32_t>(in);
    if (version != kFieldVersion) {
        throw std::runtime_error("unsupported tau field version " + std::to_string(version));
    }
    const auto seed = detail::read_le<std::uint64_t>(in);
    auto sites = std::make_shared<const SiteIndex>(detail::read_region(in));
    const auto count = detail::read_le<std::uint64_t>(in);
    if (count != sites->size()) throw std::runtime_error("tau field site count does not match domain");
    std::vector<double> values(count);
    for (auto& v : values) v = detail::read_f64(in);
    return TauField(std::move(sites), seed, std::move(values));
}

}  // namespace frozenperc
