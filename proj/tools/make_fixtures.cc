// Copyright 2026 The qhedge Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


// Writes the bundled fixtures into a directory: make_fixtures OUT_DIR

#include <array>
#include <iostream>
#include <string>

#include "qhedge/analysis.h"
#include "qhedge/io.h"

int main(int argc, char **argv) {
    if (argc != 2) {
        std::cerr << "usage: make_fixtures OUT_DIR\n";
        return 2;
    }
    using namespace qhedge;
    const std::string dir = argv[1];
    try {
        InteractiveMeasurement hedging = build_hedging_test();
        io::write_file(dir + "/hedging.test", io::format_test(hedging));
        io::write_file(dir + "/dephased-hedging.test", io::format_test(dephase_im(hedging)));
        io::write_file(dir + "/echo.test", io::format_test(build_echo_test()));
        io::write_file(dir + "/identity-2.channel", io::format_channel(choi_identity(2)));
        io::write_file(dir + "/phaseflip-4.channel", io::format_channel(hedging_strategy()));
    } catch (const std::exception &e) {
        std::cerr << "make_fixtures: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
