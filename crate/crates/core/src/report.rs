//! Serialization helpers shared by the machine-readable reports.

use serde::Serializer;

use crate::scalar::{self, Scalar};

pub fn ser_scalar<S: Serializer>(x: &Scalar, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&scalar::format(x))
}

pub fn ser_scalars<S: Serializer>(xs: &[Scalar], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(xs.iter().map(scalar::format))
}
