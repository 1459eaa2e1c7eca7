#include <gtest/gtest.h>

#include <functional>
#include <random>
#include <set>

#include "precursor/grouping.hpp"

using namespace precursor;

namespace {

std::vector<Value> values(std::initializer_list<double> xs) { return {xs.begin(), xs.end()}; }

DependenceMatrix matrix(std::vector<std::string> names, std::vector<std::optional<double>> v) {
    DependenceMatrix d;
    d.names = std::move(names);
    d.values = std::move(v);
    return d;
}

// Components by breadth-first search over an explicit adjacency list.
std::set<std::set<std::string>> bfs_components(const DependenceMatrix& d, double rho) {
    const std::size_t n = d.size();
    std::vector<int> comp(n, -1);
    int next = 0;
    for (std::size_t s = 0; s < n; ++s) {
        if (comp[s] >= 0) continue;
        std::vector<std::size_t> queue{s};
        comp[s] = next;
        for (std::size_t qi = 0; qi < queue.size(); ++qi) {
            const auto i = queue[qi];
            for (std::size_t j = 0; j < n; ++j) {
                const auto& v = d.at(i, j);
                if (i != j && comp[j] < 0 && v && std::abs(*v) >= rho) {
                    comp[j] = next;
                    queue.push_back(j);
                }
            }
        }
        ++next;
    }
    std::vector<std::set<std::string>> out(static_cast<std::size_t>(next));
    for (std::size_t i = 0; i < n; ++i) out[static_cast<std::size_t>(comp[i])].insert(d.names[i]);
    return {out.begin(), out.end()};
}

std::set<std::set<std::string>> as_sets(const ParameterGrouping& g) {
    std::set<std::set<std::string>> s;
    for (const auto& grp : g.groups) s.insert({grp.begin(), grp.end()});
    return s;
}

}  // namespace

TEST(Pearson, HandComputedValue) {
    const auto r = pearson(values({1, 2, 3, 4}), values({1, 3, 2, 4}));
    ASSERT_TRUE(r);
    EXPECT_NEAR(*r, 0.8, 1e-12);
}

TEST(Pearson, LinearDependence) {
    EXPECT_NEAR(*pearson(values({1, 2, 4, 7}), values({2, 4, 8, 14})), 1.0, 1e-12);
    EXPECT_NEAR(*pearson(values({1, 2, 4, 7}), values({-1, -2, -4, -7})), -1.0, 1e-12);
}

TEST(Pearson, AffineInvarianceOnRandomData) {
    std::mt19937_64 rng(3);
    std::normal_distribution<double> g;
    for (int t = 0; t < 20; ++t) {
        std::vector<Value> x, y;
        const double a = g(rng) * 5.0, b = g(rng);
        for (int i = 0; i < 30; ++i) {
            x.push_back(g(rng));
            y.push_back(a * *x.back() + b);
        }
        EXPECT_NEAR(*pearson(x, y), a > 0 ? 1.0 : -1.0, 1e-9);
        EXPECT_NEAR(*pearson(x, y), *pearson(y, x), 1e-15);
    }
}

TEST(Pearson, MissingWhenUndefined) {
    EXPECT_FALSE(pearson(values({1}), values({2})));
    EXPECT_FALSE(pearson(values({1, 1, 1}), values({1, 2, 3})));
    // Pairwise deletion leaves only one complete pair.
    EXPECT_FALSE(pearson(std::vector<Value>{1.0, std::nullopt, 3.0}, std::vector<Value>{std::nullopt, 2.0, 3.0}));
}

TEST(MutualInformation, IndependentIsSmallDependentIsLarge) {
    std::mt19937_64 rng(5);
    std::normal_distribution<double> g;
    std::vector<Value> x, y, z;
    for (int i = 0; i < 2000; ++i) {
        x.push_back(g(rng));
        y.push_back(g(rng));
        z.push_back(*x.back() * 3.0);
    }
    // Plug-in bias for B x B cells is about (B - 1)^2 / (2N) nats.
    const double bins = std::ceil(std::sqrt(2000.0));
    const double bias = (bins - 1) * (bins - 1) / (2.0 * 2000.0);
    EXPECT_LT(*mutual_information(x, y), bias + 0.1);
    EXPECT_GT(*mutual_information(x, z), *mutual_information(x, y) + 2.0);
    EXPECT_GE(*mutual_information(x, y), 0.0);
}

TEST(Dependence, MatrixIsSymmetricWithUnitDiagonal) {
    std::mt19937_64 rng(9);
    std::normal_distribution<double> g;
    std::vector<Value> v;
    for (int i = 0; i < 40 * 4; ++i) v.push_back(g(rng));
    std::vector<Flight> flights(40);
    for (int i = 0; i < 40; ++i) flights[static_cast<std::size_t>(i)] = i + 1;
    const TelemetryPanel p("A", flights, {}, {"a", "b", "c", "d"}, v);
    const auto d = compute_dependence(p, DependenceMeasure::Pearson);
    for (std::size_t i = 0; i < 4; ++i) {
        EXPECT_NEAR(*d.at(i, i), 1.0, 1e-12);
        for (std::size_t j = 0; j < 4; ++j) EXPECT_DOUBLE_EQ(*d.at(i, j), *d.at(j, i));
    }
}

TEST(Groups, SingleEdge) {
    const auto d = matrix({"a", "b", "c"}, {1.0, 0.95, 0.1, 0.95, 1.0, 0.2, 0.1, 0.2, 1.0});
    const auto g = build_groups(d, 0.9);
    EXPECT_EQ(g.groups, (std::vector<std::vector<std::string>>{{"a", "b"}, {"c"}}));
}

TEST(Groups, CompleteGraphBelowMinimum) {
    const auto d = matrix({"a", "b", "c"}, {1.0, 0.5, -0.4, 0.5, 1.0, 0.3, -0.4, 0.3, 1.0});
    EXPECT_EQ(build_groups(d, 0.3).groups.size(), 1u);
}

TEST(Groups, ChainIsTransitive) {
    const auto d = matrix({"a", "b", "c"}, {1.0, 0.8, 0.1, 0.8, 1.0, 0.8, 0.1, 0.8, 1.0});
    const auto g = build_groups(d, 0.7);
    EXPECT_EQ(g.groups, (std::vector<std::vector<std::string>>{{"a", "b", "c"}}));
    EXPECT_EQ(as_sets(g), bfs_components(d, 0.7));
}

TEST(Groups, MissingEntryIsNoEdge) {
    const auto d = matrix({"a", "b"}, {1.0, std::nullopt, std::nullopt, 1.0});
    EXPECT_EQ(build_groups(d, 0.5).groups.size(), 2u);
}

TEST(Groups, PartitionAndRefinementOnRandomMatrices) {
    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::bernoulli_distribution miss(0.1);
    for (int t = 0; t < 200; ++t) {
        const std::size_t n = 2 + static_cast<std::size_t>(t % 9);
        std::vector<std::string> names;
        for (std::size_t i = 0; i < n; ++i) names.push_back("p" + std::to_string(i));
        std::vector<std::optional<double>> v(n * n);
        for (std::size_t i = 0; i < n; ++i) {
            v[i * n + i] = 1.0;
            for (std::size_t j = i + 1; j < n; ++j) {
                const std::optional<double> x = miss(rng) ? std::nullopt : std::optional<double>(u(rng));
                v[i * n + j] = v[j * n + i] = x;
            }
        }
        const auto d = matrix(names, v);
        const double lo = std::abs(u(rng)) + 1e-3;
        const double hi = std::min(1.0, lo + std::abs(u(rng)) * 0.5);
        const auto coarse = build_groups(d, lo), fine = build_groups(d, hi);
        EXPECT_EQ(as_sets(coarse), bfs_components(d, lo));

        std::multiset<std::string> seen;
        for (const auto& grp : fine.groups) seen.insert(grp.begin(), grp.end());
        EXPECT_EQ(seen, std::multiset<std::string>(names.begin(), names.end()));

        // Every fine group sits inside a single coarse group.
        for (const auto& grp : fine.groups) {
            const auto home = std::find_if(coarse.groups.begin(), coarse.groups.end(), [&](const auto& c) {
                return std::find(c.begin(), c.end(), grp.front()) != c.end();
            });
            ASSERT_NE(home, coarse.groups.end());
            for (const auto& name : grp) EXPECT_NE(std::find(home->begin(), home->end(), name), home->end());
        }
    }
}

TEST(Groups, MeasureNamesRoundTrip) {
    EXPECT_EQ(parse_measure("pearson"), DependenceMeasure::Pearson);
    EXPECT_EQ(parse_measure(to_string(DependenceMeasure::MutualInfo)), DependenceMeasure::MutualInfo);
    EXPECT_THROW(parse_measure("spearman"), InputError);
}
