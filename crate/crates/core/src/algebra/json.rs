//! `{"shape":[n1,...],"blocks":[[[ [re,im], ... ] per row ] per block]}`, row-major.

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{AlgebraShape, CMat, Element, C64};
use crate::error::{Error, Result};

#[derive(Serialize, Deserialize)]
struct ElementRepr {
    shape: Vec<usize>,
    blocks: Vec<Vec<Vec<[f64; 2]>>>,
}

impl From<&Element> for ElementRepr {
    fn from(e: &Element) -> Self {
        ElementRepr {
            shape: e.shape().dims().to_vec(),
            blocks: e
                .blocks()
                .iter()
                .map(|m| {
                    (0..m.nrows())
                        .map(|i| {
                            (0..m.ncols())
                                .map(|j| [m[(i, j)].re, m[(i, j)].im])
                                .collect()
                        })
                        .collect()
                })
                .collect(),
        }
    }
}

impl TryFrom<ElementRepr> for Element {
    type Error = Error;

    fn try_from(repr: ElementRepr) -> Result<Self> {
        let shape = AlgebraShape::new(repr.shape)?;
        if repr.blocks.len() != shape.block_count() {
            return Err(Error::Decode(format!(
                "shape lists {} blocks but {} were given",
                shape.block_count(),
                repr.blocks.len()
            )));
        }
        let mut blocks = Vec::with_capacity(repr.blocks.len());
        for (b, rows) in repr.blocks.into_iter().enumerate() {
            let n = shape.dim(b);
            if rows.len() != n || rows.iter().any(|r| r.len() != n) {
                return Err(Error::Decode(format!("block {b} is not {n}x{n}")));
            }
            let mut m = CMat::zeros(n, n);
            for (i, row) in rows.into_iter().enumerate() {
                for (j, [re, im]) in row.into_iter().enumerate() {
                    if !re.is_finite() || !im.is_finite() {
                        return Err(Error::Decode(format!(
                            "block {b} entry ({i},{j}) is not finite"
                        )));
                    }
                    m[(i, j)] = C64::new(re, im);
                }
            }
            blocks.push(m);
        }
        Element::new(shape, blocks)
    }
}

impl Serialize for Element {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        ElementRepr::from(self).serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Element {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let repr = ElementRepr::deserialize(deserializer)?;
        Element::try_from(repr).map_err(serde::de::Error::custom)
    }
}

impl Element {
    pub fn from_json(text: &str) -> Result<Element> {
        serde_json::from_str(text).map_err(|e| Error::Decode(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("element serialization is infallible")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::SeededSampler;
    use proptest::prelude::*;

    #[test]
    fn documented_layout() {
        let shape = AlgebraShape::new(vec![2, 1]).unwrap();
        let e = Element::matrix_unit(&shape, 0, 0).unwrap();
        assert_eq!(
            e.to_json(),
            r#"{"shape":[2,1],"blocks":[[[[1.0,0.0],[0.0,0.0]],[[0.0,0.0],[0.0,0.0]]],[[[1.0,0.0]]]]}"#
        );
    }

    #[test]
    fn rejects_malformed() {
        assert!(Element::from_json("{").is_err());
        assert!(Element::from_json(r#"{"shape":[2],"blocks":[[[[1,0]]]]}"#).is_err());
        assert!(Element::from_json(r#"{"shape":[1],"blocks":[]}"#).is_err());
        assert!(Element::from_json(r#"{"shape":[0],"blocks":[[]]}"#).is_err());
        assert!(Element::from_json(r#"{"shape":[1],"blocks":[[[[1,0]]]]}"#).is_ok());
    }

    proptest! {
        #[test]
        fn json_round_trip_is_exact(seed in any::<u64>(), dims in prop::collection::vec(1usize..4, 1..4)) {
            let shape = AlgebraShape::new(dims).unwrap();
            let e = SeededSampler::new(seed).random_element(&shape);
            prop_assert_eq!(Element::from_json(&e.to_json()).unwrap(), e);
        }
    }
}
