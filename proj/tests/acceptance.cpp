#include <cstdlib>
#include <iostream>
#include <string>
#include <thread>

#include "obstruct/acceptance.hpp"

int main(int argc, char** argv) {
    int jobs = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    if (argc > 1)
        jobs = std::atoi(argv[1]);
    auto results = obstruct::run_acceptance(jobs);
    std::cout << obstruct::format_acceptance(results);
    for (auto const& r : results)
        if (!r.pass)
            return 1;
    return 0;
}
