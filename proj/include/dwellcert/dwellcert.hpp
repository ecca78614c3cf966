/*
 Copyright 2026 The dwellcert Authors

 Licensed under the Apache License, Version 2.0 (the "License");
 you may not use this file except in compliance with the License.
 You may obtain a copy of the License at

      https://www.apache.org/licenses/LICENSE-2.0

 Unless required by applicable law or agreed to in writing, software
 distributed under the License is distributed on an "AS IS" BASIS,
 WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 See the License for the specific language governing permissions and
 limitations under the License.
*/
#ifndef DWELLCERT_DWELLCERT_HPP
#define DWELLCERT_DWELLCERT_HPP

#include "certificate.hpp"
#include "error.hpp"
#include "family.hpp"
#include "matrix.hpp"
#include "reference_example.hpp"
#include "switching.hpp"
#include "word.hpp"

#endif // DWELLCERT_DWELLCERT_HPP
