//! stub
pub struct RadialDensity;
