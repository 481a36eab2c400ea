// Copyright 2026 The tsteer Authors
// SPDX-License-Identifier: Apache-2.0

//! Holds the `acceptance` test target; the library itself is empty.
