//! The filtered instance: filtered F_p[G]-modules, gr-split exact structure,
//! filtration shift, sigma the underlying identity.

use super::category::{Arrow, Background, ExactCategory, Key};
use crate::error::Result;
use crate::filtered::{cokernel_filtered, cover, hom_filtered, kernel_filtered, FilteredMorphism, FilteredObject};
use crate::group::FiniteGroup;
use crate::linalg::{Mat, Modulus};
use std::sync::Arc;

#[derive(Clone, Debug)]
pub struct FilteredCategory {
    group: Arc<FiniteGroup>,
    field: Modulus,
}

impl FilteredCategory {
    pub fn new(group: Arc<FiniteGroup>, field: Modulus) -> Result<Self> {
        // validates the pair through the zero object's coefficient check
        FilteredObject::new(crate::group::GModule::trivial(group.clone(), field, 0), vec![])?;
        Ok(FilteredCategory { group, field })
    }
    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }
    pub fn to_morphism(&self, f: &Arrow<FilteredObject>) -> FilteredMorphism {
        FilteredMorphism::unchecked(&f.src, &f.tgt, f.mat.clone())
    }
    pub fn from_morphism(f: &FilteredMorphism) -> Arrow<FilteredObject> {
        Arrow { src: f.src().clone(), tgt: f.tgt().clone(), mat: f.mat().clone() }
    }
}

impl ExactCategory for FilteredCategory {
    type Obj = FilteredObject;

    fn field(&self) -> Modulus {
        self.field
    }
    fn dim(&self, x: &FilteredObject) -> usize {
        x.dim()
    }
    fn check(&self, x: &FilteredObject, y: &FilteredObject, mat: &Mat) -> Result<()> {
        FilteredMorphism::new(x, y, mat.clone()).map(|_| ())
    }
    fn zero_object(&self) -> FilteredObject {
        FilteredObject::zero(self.group.clone(), self.field)
    }
    fn direct_sum(&self, parts: &[&FilteredObject]) -> Result<FilteredObject> {
        if parts.is_empty() {
            return Ok(self.zero_object());
        }
        FilteredObject::direct_sum(parts)
    }
    fn twist(&self, x: &FilteredObject, k: i32) -> FilteredObject {
        x.twist(k)
    }
    fn sigma(&self, x: &FilteredObject) -> Mat {
        Mat::identity(self.field, x.dim())
    }
    fn is_adm_mono(&self, f: &Arrow<FilteredObject>) -> bool {
        self.to_morphism(f).is_adm_mono()
    }
    fn is_adm_epi(&self, f: &Arrow<FilteredObject>) -> bool {
        self.to_morphism(f).is_adm_epi()
    }
    fn kernel(&self, e: &Arrow<FilteredObject>) -> Result<Arrow<FilteredObject>> {
        Ok(Self::from_morphism(&kernel_filtered(&self.to_morphism(e))?))
    }
    fn cokernel(&self, i: &Arrow<FilteredObject>) -> Result<Arrow<FilteredObject>> {
        Ok(Self::from_morphism(&cokernel_filtered(&self.to_morphism(i))?))
    }
    fn divide_by_sigma(&self, f: &Arrow<FilteredObject>) -> Result<Arrow<FilteredObject>> {
        Ok(Self::from_morphism(&self.to_morphism(f).divide_by_sigma()?))
    }
    fn cover(&self, x: &FilteredObject) -> Result<Arrow<FilteredObject>> {
        Ok(Self::from_morphism(&cover(x)?))
    }
    fn hom_basis(&self, x: &FilteredObject, y: &FilteredObject) -> Result<Vec<Mat>> {
        Ok(hom_filtered(x, y)?.into_iter().map(|f| f.mat().clone()).collect())
    }
}

/// Background gr: the associated graded space, one degree key per adapted basis vector.
#[derive(Clone, Copy, Debug, Default)]
pub struct GrBackground;

impl Background<FilteredCategory> for GrBackground {
    fn name(&self) -> &'static str {
        "gr"
    }
    fn keys(&self, x: &FilteredObject) -> Vec<Key> {
        x.degrees().iter().map(|&d| Key::Deg(d)).collect()
    }
    fn map(&self, f: &Arrow<FilteredObject>) -> Mat {
        FilteredMorphism::unchecked(&f.src, &f.tgt, f.mat.clone()).gr().mat
    }
}

/// Background (gr, total gr): the pair of the graded space and the same space with
/// the grading forgotten, a second functor with the required properties.
#[derive(Clone, Copy, Debug, Default)]
pub struct GrFlatBackground;

impl Background<FilteredCategory> for GrFlatBackground {
    fn name(&self) -> &'static str {
        "gr+flat"
    }
    fn keys(&self, x: &FilteredObject) -> Vec<Key> {
        let mut k: Vec<Key> = x.degrees().iter().map(|&d| Key::Deg(d)).collect();
        k.extend(std::iter::repeat_n(Key::Flat, x.dim()));
        k
    }
    fn map(&self, f: &Arrow<FilteredObject>) -> Mat {
        let g = GrBackground.map(f);
        g.dsum(&g)
    }
}
