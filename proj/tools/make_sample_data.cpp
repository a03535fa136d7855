// Regenerates data/sample_markets.csv: business-day level series whose first
// differences follow the market-mirror benchmark truth, integrated from fixed
// starting levels with per-variable scale and drift. Levels are unit-root by
// construction so the bundled config exercises the differencing path.

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <set>
#include <string>
#include <vector>

#include "tscausal/synthbench.hpp"

int main(int argc, char** argv) {
    const std::string out_path = argc > 1 ? argv[1] : "data/sample_markets.csv";
    const uint64_t seed = argc > 2 ? std::stoull(argv[2]) : 2022;

    using namespace std::chrono;
    const year_month_day first = 2021y / July / 1;
    const year_month_day last = 2022y / December / 30;

    // Fixed exchange holidays; weekends are skipped by rule.
    const std::set<sys_days> holidays = {
        sys_days(2021y / July / 5),      sys_days(2021y / September / 6),
        sys_days(2021y / November / 25), sys_days(2021y / December / 24),
        sys_days(2022y / January / 17),  sys_days(2022y / February / 21),
        sys_days(2022y / April / 15),    sys_days(2022y / May / 30),
        sys_days(2022y / July / 4),      sys_days(2022y / September / 5),
        sys_days(2022y / November / 24), sys_days(2022y / December / 26),
    };

    std::vector<sys_days> dates;
    for (sys_days d = sys_days(first); d <= sys_days(last); d += days{1}) {
        weekday wd{d};
        if (wd == Saturday || wd == Sunday) continue;
        if (holidays.count(d)) continue;
        dates.push_back(d);
    }

    tscausal::BenchmarkCase mirror = tscausal::market_mirror_case(seed);
    tscausal::TimeSeriesDataset diffs =
        tscausal::generate(mirror.truth, static_cast<int>(dates.size()) - 1, seed);

    const int n = static_cast<int>(mirror.truth.variable_names.size());
    const double base[] = {110.95, 28707.0, 4319.94, 1.48, 151.56, 0.045};
    const double scale[] = {0.35, 180.0, 28.0, 0.035, 0.12, 0.006};
    const double drift[] = {0.028, -3.0, -1.2, 0.006, -0.02, 0.00005};
    const int decimals[] = {3, 2, 2, 4, 3, 4};

    std::ofstream out(out_path, std::ios::binary);
    if (!out) {
        std::cerr << "cannot write " << out_path << "\n";
        return 1;
    }
    out << "Date";
    for (const auto& name : mirror.truth.variable_names) out << "," << name;
    out << "\n";

    std::vector<double> level(base, base + n);
    char buf[64];
    for (size_t t = 0; t < dates.size(); ++t) {
        if (t > 0)
            for (int j = 0; j < n; ++j)
                level[j] += drift[j] + scale[j] * diffs.values()(t - 1, j);
        year_month_day ymd{dates[t]};
        std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", int(ymd.year()),
                      unsigned(ymd.month()), unsigned(ymd.day()));
        out << buf;
        for (int j = 0; j < n; ++j) {
            std::snprintf(buf, sizeof buf, ",%.*f", decimals[j], level[j]);
            out << buf;
        }
        out << "\n";
    }
    std::cout << "wrote " << out_path << " (" << dates.size() << " rows, " << n
              << " variables)\n";
    return 0;
}
