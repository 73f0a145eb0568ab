#include "ssd/error.hpp"
#include "ssd/estimates.hpp"

#include "doctest.h"
#include "support.hpp"

using namespace ssd::estimates;
using Visibility = std::vector<std::vector<int>>;

namespace {

Visibility random_visibility(ssd::Rng& rng, int n, double p)
{
    Visibility v(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            if (i != j && rng.bernoulli(p)) {
                v[static_cast<std::size_t>(i)].push_back(j);
            }
        }
    }
    return v;
}

Visibility everyone(int n)
{
    Visibility v(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            if (i != j) {
                v[static_cast<std::size_t>(i)].push_back(j);
            }
        }
    }
    return v;
}

} // namespace

TEST_CASE("initial tables hold the neutral estimate")
{
    const auto t = initial_tables(3);
    REQUIRE(t.size() == 3);
    CHECK(t[1].owner == 1);
    CHECK(t[1].others() == std::vector<double>{0.5, 0.5});
    CHECK(t[1].tau == std::vector<int>{0, 0, 0});
    CHECK(total_age(t, 0) == 0);
}

TEST_CASE("three-agent hand trace")
{
    const Visibility v1 = {{1}, {0, 2}, {1}};
    const Visibility v2 = {{1}, {0}, {}};
    const std::vector<double> own1 = {0.2, 0.4, 0.6};
    const std::vector<double> own2 = {0.1, 0.3, 0.9};

    const auto t0 = initial_tables(3);
    const auto t1 = propagate(t0, v1, own1, 1);
    const auto t2 = propagate(t1, v2, own2, 2);

    // owner, subject, estimate, tau
    const std::vector<DumpRow> expected1 = {
        {1, 0, 1, 0.4, 1}, {1, 0, 2, 0.5, 0}, {1, 1, 0, 0.2, 1},
        {1, 1, 2, 0.6, 1}, {1, 2, 0, 0.5, 0}, {1, 2, 1, 0.4, 1},
    };
    const std::vector<DumpRow> expected2 = {
        {2, 0, 1, 0.3, 2}, {2, 0, 2, 0.6, 1}, {2, 1, 0, 0.1, 2},
        {2, 1, 2, 0.6, 1}, {2, 2, 0, 0.5, 0}, {2, 2, 1, 0.4, 1},
    };
    CHECK(dump_rows(t1, 1) == expected1);
    CHECK(dump_rows(t2, 2) == expected2);
    // agent 0 learns about agent 2 second-hand, one step old
    CHECK(2 - t2[0].tau[2] == 1);
    CHECK(total_age(t1, 1) == 2);
    CHECK(total_age(t2, 2) == 5);
    CHECK(average_age({t0, t1, t2}) == 7.0 / 6.0);

    AgeAccumulator acc;
    acc.add(t0, 0);
    acc.add(t1, 1);
    acc.add(t2, 2);
    CHECK(acc.average() == 7.0 / 6.0);

    const auto csv = dump_to_csv(dump_rows(t2, 2));
    CHECK(csv.rfind("t,owner,subject,estimate,tau\n2,0,1,0.3,2\n2,0,2,0.6,1\n", 0) == 0);
}

TEST_CASE("isolated agents only age")
{
    const auto t0 = initial_tables(2);
    const Visibility none = {{}, {}};
    const std::vector<double> own = {0.9, 0.1};
    const auto t1 = propagate(t0, none, own, 1);
    const auto t2 = propagate(t1, none, own, 2);
    CHECK(t2 == t0);
    CHECK(total_age(t1, 1) == 2);
    CHECK(total_age(t2, 2) == 4);
    CHECK(average_age({t0, t1, t2}) == 1.5);
}

TEST_CASE("full visibility tracks the truth with age zero")
{
    ssd::Rng rng(1);
    for (int trial = 0; trial < 20; ++trial) {
        const int n = test::integer(rng, 2, 10);
        auto tables = initial_tables(n);
        AgeAccumulator acc;
        acc.add(tables, 0);
        for (int t = 1; t <= 30; ++t) {
            std::vector<double> own(static_cast<std::size_t>(n));
            for (auto& v : own) {
                v = rng.uniform();
            }
            tables = propagate(tables, everyone(n), own, t);
            acc.add(tables, t);
            for (int i = 0; i < n; ++i) {
                for (int j = 0; j < n; ++j) {
                    if (i != j) {
                        CHECK(tables[static_cast<std::size_t>(i)].estimate[static_cast<std::size_t>(j)] ==
                              own[static_cast<std::size_t>(j)]);
                        CHECK(tables[static_cast<std::size_t>(i)].tau[static_cast<std::size_t>(j)] == t);
                    }
                }
            }
        }
        CHECK(acc.average() == 0.0);
    }
}

TEST_CASE("propagation never installs staler data and observes visible agents exactly")
{
    ssd::Rng rng(2);
    for (int trial = 0; trial < 50; ++trial) {
        const int n = test::integer(rng, 2, 8);
        auto tables = initial_tables(n);
        for (int t = 1; t <= 40; ++t) {
            const auto vis = random_visibility(rng, n, 0.2);
            std::vector<double> own(static_cast<std::size_t>(n));
            for (auto& v : own) {
                v = rng.uniform();
            }
            const auto next = propagate(tables, vis, own, t);
            for (int i = 0; i < n; ++i) {
                const auto& before = tables[static_cast<std::size_t>(i)];
                const auto& after = next[static_cast<std::size_t>(i)];
                for (int k = 0; k < n; ++k) {
                    if (k == i) {
                        continue;
                    }
                    CHECK(after.tau[static_cast<std::size_t>(k)] >= before.tau[static_cast<std::size_t>(k)]);
                    CHECK(after.tau[static_cast<std::size_t>(k)] <= t);
                    CHECK(after.estimate[static_cast<std::size_t>(k)] >= 0.0);
                    CHECK(after.estimate[static_cast<std::size_t>(k)] <= 1.0);
                }
                for (int j : vis[static_cast<std::size_t>(i)]) {
                    CHECK(after.estimate[static_cast<std::size_t>(j)] == own[static_cast<std::size_t>(j)]);
                    CHECK(after.tau[static_cast<std::size_t>(j)] == t);
                }
            }
            tables = next;
        }
    }
}

TEST_CASE("a connected ring floods information within the window bound")
{
    const int n = 6;
    Visibility ring(n);
    for (int i = 0; i < n; ++i) {
        ring[static_cast<std::size_t>(i)] = {(i + 1) % n, (i + n - 1) % n};
    }
    auto tables = initial_tables(n);
    const std::vector<double> own(n, 0.7);
    for (int t = 1; t <= 10; ++t) {
        tables = propagate(tables, ring, own, t);
    }
    for (const auto& tab : tables) {
        for (int k = 0; k < n; ++k) {
            if (k != tab.owner) {
                CHECK(10 - tab.tau[static_cast<std::size_t>(k)] < n);
            }
        }
    }
}

TEST_CASE("ties go to the lowest id")
{
    auto t0 = initial_tables(4);
    t0[1].estimate[3] = 0.1;
    t0[1].tau[3] = 5;
    t0[2].estimate[3] = 0.9;
    t0[2].tau[3] = 5;
    const Visibility v = {{1, 2}, {}, {}, {}};
    const std::vector<double> own = {0.5, 0.5, 0.5, 0.5};
    const auto t1 = propagate(t0, v, own, 6);
    CHECK(t1[0].estimate[3] == 0.1);
    CHECK(t1[0].tau[3] == 5);
}

TEST_CASE("bad visibility is rejected")
{
    const auto t0 = initial_tables(2);
    const std::vector<double> own = {0.5, 0.5};
    const Visibility unknown = {{5}, {}};
    CHECK_THROWS_AS(propagate(t0, unknown, own, 1), ssd::ValidationError);
    const Visibility self = {{0}, {}};
    CHECK_THROWS_AS(propagate(t0, self, own, 1), ssd::ValidationError);
    const Visibility short_list = {{1}};
    CHECK_THROWS_AS(propagate(t0, short_list, own, 1), ssd::ValidationError);
    CHECK_THROWS_AS(average_age({t0}), ssd::ValidationError);
}

TEST_CASE("average range of smoothed rewards")
{
    using ssd::shaping::SmoothedTracker;
    using ssd::shaping::update_smoothed;
    std::vector<SmoothedTracker> zeros(2);
    for (auto& t : zeros) {
        for (int k = 0; k < 10; ++k) {
            t = update_smoothed(t, 0.0, 0.99, 0.9);
        }
    }
    CHECK(average_range(zeros) == 0.0);

    const std::vector<SmoothedTracker> pair = {{0, 0, 2, 0, 1}, {0, -1, 3, 0, 1}};
    CHECK(average_range(pair) == 3.0);

    SmoothedTracker one;
    for (int k = 0; k < 2000; ++k) {
        one = update_smoothed(one, 1.0, 0.99, 0.9);
    }
    const std::vector<SmoothedTracker> single = {one};
    CHECK(one.e_min == 1.0);
    CHECK(one.e_max == doctest::Approx(1.0 / (1.0 - 0.891)).epsilon(1e-12));
    CHECK(average_range(single) == doctest::Approx(1.0 / (1.0 - 0.891) - 1.0).epsilon(1e-12));
    CHECK(average_range(single) == doctest::Approx(8.174).epsilon(1e-4));
    CHECK_THROWS_AS(average_range({}), ssd::ValidationError);
}
