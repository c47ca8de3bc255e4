use std::fmt::Display;

use serde::Serializer;

/// Big integers go out as decimal strings so no consumer rounds them.
pub(crate) fn big_as_string<T: Display, S: Serializer>(v: &T, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(v)
}
