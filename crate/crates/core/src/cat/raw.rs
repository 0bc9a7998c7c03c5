use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use super::{CatError, CatParts, FinCat};

/// Category file contents.
///
/// Composites whose first or second factor is an identity may be omitted;
/// they are completed during validation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawCategory {
    pub objects: Vec<String>,
    pub morphisms: Vec<RawMorphism>,
    #[serde(default)]
    pub identities: BTreeMap<String, String>,
    #[serde(default)]
    pub composition: Vec<RawComposite>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawMorphism {
    pub id: String,
    pub src: String,
    pub tgt: String,
}

/// `equals` is the composite of `first` followed by `then`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawComposite {
    pub first: String,
    pub then: String,
    pub equals: String,
}

/// Check a parsed category description and build the immutable [`FinCat`].
pub fn validate_category(raw: &RawCategory) -> Result<FinCat, CatError> {
    let mut parts = CatParts::default();
    let mut obj_pos = HashMap::new();
    for o in &raw.objects {
        if obj_pos.insert(o.as_str(), parts.add_object(o.clone())).is_some() {
            return Err(CatError::DuplicateObject(o.clone()));
        }
    }
    let lookup_obj = |name: &str| {
        obj_pos
            .get(name)
            .copied()
            .ok_or_else(|| CatError::UnknownObject(name.to_owned()))
    };
    let mut mor_pos = HashMap::new();
    for m in &raw.morphisms {
        let (s, t) = (lookup_obj(&m.src)?, lookup_obj(&m.tgt)?);
        if mor_pos
            .insert(m.id.as_str(), parts.add_morphism(m.id.clone(), s, t))
            .is_some()
        {
            return Err(CatError::DuplicateMorphism(m.id.clone()));
        }
    }
    let lookup_mor = |name: &str| {
        mor_pos
            .get(name)
            .copied()
            .ok_or_else(|| CatError::UnknownMorphism(name.to_owned()))
    };
    for name in raw.identities.keys() {
        lookup_obj(name)?;
    }
    for o in &raw.objects {
        let id = raw
            .identities
            .get(o)
            .ok_or_else(|| CatError::MissingIdentity { object: o.clone() })?;
        let m = lookup_mor(id)?;
        let (_, s, t) = &parts.morphisms[m];
        if *s != obj_pos[o.as_str()] || *t != obj_pos[o.as_str()] {
            return Err(CatError::IdentityShape {
                object: o.clone(),
                morphism: id.clone(),
            });
        }
        parts.identities.push(m);
    }

    let mut table: HashMap<(usize, usize), usize> = HashMap::new();
    for c in &raw.composition {
        let (f, g, h) = (lookup_mor(&c.first)?, lookup_mor(&c.then)?, lookup_mor(&c.equals)?);
        if parts.morphisms[f].2 != parts.morphisms[g].1 {
            return Err(CatError::NonComposablePairInTable {
                first: c.first.clone(),
                then: c.then.clone(),
            });
        }
        if let Some(prev) = table.insert((g, f), h) {
            if prev != h {
                return Err(CatError::ConflictingComposite {
                    first: c.first.clone(),
                    then: c.then.clone(),
                });
            }
        }
    }
    let is_id: Vec<bool> = {
        let mut v = vec![false; parts.morphisms.len()];
        for &i in &parts.identities {
            v[i] = true;
        }
        v
    };
    FinCat::from_parts(parts, |g, f| {
        table.get(&(g, f)).copied().or(if is_id[g] {
            Some(f)
        } else if is_id[f] {
            Some(g)
        } else {
            None
        })
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn raw(json: &str) -> RawCategory {
        serde_json::from_str(json).unwrap()
    }

    #[test]
    fn terminal_category() {
        let c = validate_category(&raw(
            r#"{"objects":["*"],"morphisms":[{"id":"1","src":"*","tgt":"*"}],"identities":{"*":"1"}}"#,
        ))
        .unwrap();
        assert_eq!(c.num_objects(), 1);
        assert_eq!(c.num_morphisms(), 1);
    }

    #[test]
    fn missing_identity() {
        let err = validate_category(&raw(
            r#"{"objects":["*"],"morphisms":[{"id":"1","src":"*","tgt":"*"}]}"#,
        ))
        .unwrap_err();
        assert_eq!(err, CatError::MissingIdentity { object: "*".into() });
    }

    #[test]
    fn non_composable_pair_listed() {
        let err = validate_category(&raw(r#"{"objects":["a","b"],
                "morphisms":[{"id":"1a","src":"a","tgt":"a"},{"id":"1b","src":"b","tgt":"b"},
                             {"id":"u","src":"a","tgt":"b"}],
                "identities":{"a":"1a","b":"1b"},
                "composition":[{"first":"u","then":"u","equals":"u"}]}"#))
        .unwrap_err();
        assert!(matches!(err, CatError::NonComposablePairInTable { .. }));
    }

    #[test]
    fn missing_composite() {
        let err = validate_category(&raw(r#"{"objects":["*"],
                "morphisms":[{"id":"1","src":"*","tgt":"*"},{"id":"e","src":"*","tgt":"*"}],
                "identities":{"*":"1"}}"#))
        .unwrap_err();
        assert_eq!(
            err,
            CatError::MissingComposite {
                first: "e".into(),
                then: "e".into()
            }
        );
    }

    #[test]
    fn unit_violation_when_identity_composite_is_wrong() {
        let err = validate_category(&raw(r#"{"objects":["*"],
                "morphisms":[{"id":"1","src":"*","tgt":"*"},{"id":"e","src":"*","tgt":"*"}],
                "identities":{"*":"1"},
                "composition":[{"first":"1","then":"e","equals":"1"},
                               {"first":"e","then":"e","equals":"e"}]}"#))
        .unwrap_err();
        assert!(matches!(err, CatError::UnitViolation { .. }));
    }

    #[test]
    fn associativity_violation() {
        // (a∘a)∘b = b∘b = 1 but a∘(a∘b) = a∘a = b.
        let err = validate_category(&raw(r#"{"objects":["*"],
                "morphisms":[{"id":"1","src":"*","tgt":"*"},{"id":"a","src":"*","tgt":"*"},
                             {"id":"b","src":"*","tgt":"*"}],
                "identities":{"*":"1"},
                "composition":[{"first":"a","then":"a","equals":"b"},
                               {"first":"a","then":"b","equals":"a"},
                               {"first":"b","then":"a","equals":"a"},
                               {"first":"b","then":"b","equals":"1"}]}"#))
        .unwrap_err();
        assert!(matches!(err, CatError::AssociativityViolation { .. }), "{err:?}");
    }

    #[test]
    fn idempotent_monoid_is_a_category() {
        let c = validate_category(&raw(r#"{"objects":["*"],
                "morphisms":[{"id":"1","src":"*","tgt":"*"},{"id":"e","src":"*","tgt":"*"}],
                "identities":{"*":"1"},
                "composition":[{"first":"e","then":"e","equals":"e"}]}"#))
        .unwrap();
        let e = c.mor("e").unwrap();
        assert_eq!(c.compose(e, e), e);
    }
}
