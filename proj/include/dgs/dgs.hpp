/*
Copyright 2026 The dgs Authors

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
*/

#pragma once

#include "dgs/cost.hpp"
#include "dgs/driver.hpp"
#include "dgs/experiments.hpp"
#include "dgs/graph.hpp"
#include "dgs/greedy.hpp"
#include "dgs/max_flow.hpp"
#include "dgs/mcut.hpp"
#include "dgs/objective.hpp"
#include "dgs/oracle.hpp"
#include "dgs/repair.hpp"
#include "dgs/solve_config.hpp"
#include "dgs/tree_dp.hpp"
