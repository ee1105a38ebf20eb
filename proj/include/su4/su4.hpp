// Copyright 2026 The su4sim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include "su4/basis.hpp"
#include "su4/dynamics.hpp"
#include "su4/errors.hpp"
#include "su4/liouvillian.hpp"
#include "su4/observables.hpp"
#include "su4/oracle.hpp"
#include "su4/params.hpp"
#include "su4/projection.hpp"
#include "su4/state.hpp"
#include "su4/superop.hpp"
