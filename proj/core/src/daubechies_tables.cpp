// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 ewspec Project Contributors
//
// Daubechies low-pass filter coefficients, normalized to sum = sqrt(2).
// Generated by scripts/generate_daubechies.py (spectral factorization at
// 60 decimal digits); do not edit by hand.  Orthonormality and moment
// conditions are re-verified at runtime by WaveletFilter's constructor.

#include "ewspec/wavelet.hpp"

#include <stdexcept>

namespace ewspec::detail {
namespace {

constexpr double kEp1[] = {
    0.70710678118654752, 0.70710678118654752};
constexpr double kEp2[] = {
    0.48296291314453414, 0.83651630373780791, 0.22414386804201338, -0.12940952255126038};
constexpr double kEp3[] = {
    0.33267055295008262, 0.80689150931109258, 0.45987750211849157, -0.13501102001025459, -0.085441273882026662, 0.035226291885709537};
constexpr double kEp4[] = {
    0.23037781330889650, 0.71484657055291565, 0.63088076792985891, -0.027983769416859854, -0.18703481171909308, 0.030841381835560764, 0.032883011666885200, -0.010597401785069032};
constexpr double kEp5[] = {
    0.16010239797419291, 0.60382926979718967, 0.72430852843777293, 0.13842814590132073, -0.24229488706638203, -0.032244869584638375, 0.077571493840045714, -0.0062414902127982743, -0.012580751999081999, 0.0033357252854737713};
constexpr double kEp6[] = {
    0.11154074335010946, 0.49462389039845309, 0.75113390802109535, 0.31525035170919763, -0.22626469396543982, -0.12976686756726194, 0.097501605587323049, 0.027522865530305729, -0.031582039317486030, 0.00055384220116149614, 0.0047772575109455106, -0.0010773010853084796};
constexpr double kEp7[] = {
    0.077852054085009179, 0.39653931948191731, 0.72913209084623512, 0.46978228740519312, -0.14390600392856498, -0.22403618499387498, 0.071309219266830265, 0.080612609151083072, -0.038029936935014414, -0.016574541630666881, 0.012550998556099841, 0.00042957797292136652, -0.0018016407040474909, 0.00035371379997452025};
constexpr double kEp8[] = {
    0.054415842243104010, 0.31287159091429997, 0.67563073629728981, 0.58535468365420671, -0.015829105256349306, -0.28401554296154693, 0.00047248457391328277, 0.12874742662047846, -0.017369301001807546, -0.044088253930794752, 0.013981027917398282, 0.0087460940474057767, -0.0048703529934515743, -0.00039174037337694705, 0.00067544940645056937, -0.00011747678412476953};
constexpr double kEp9[] = {
    0.038077947363878347, 0.24383467461259035, 0.60482312369011111, 0.65728807805130054, 0.13319738582500758, -0.29327378327917491, -0.096840783222976461, 0.14854074933810638, 0.030725681479333379, -0.067632829061329974, 0.00025094711483145196, 0.022361662123679097, -0.0047232047577513973, -0.0042815036824634298, 0.0018476468830562265, 0.00023038576352319597, -0.00025196318894271014, 3.9347320316271599e-5};
constexpr double kEp10[] = {
    0.026670057900555554, 0.18817680007769149, 0.52720118893172559, 0.68845903945360357, 0.28117234366057746, -0.24984642432731538, -0.19594627437737704, 0.12736934033579326, 0.093057364603572351, -0.071394147166397087, -0.029457536821875813, 0.033212674059341002, 0.0036065535669561697, -0.010733175483330575, 0.0013953517470529012, 0.0019924052951850561, -0.00068585669495971163, -0.00011646685512928545, 9.3588670320069591e-5, -1.3264202894521245e-5};

constexpr double kLa4[] = {
    0.032223100604051468, -0.012603967262031304, -0.099219543576633533, 0.29785779560530605, 0.80373875180513208, 0.49761866763277499, -0.029635527646002492, -0.075765714789502213};
constexpr double kLa5[] = {
    0.019538882735249827, -0.021101834024689041, -0.17532808990805622, 0.016602105764510848, 0.63397896345679206, 0.72340769040404079, 0.19939753397685560, -0.039134249302313844, 0.029519490925706261, 0.027333068344998769};
constexpr double kLa6[] = {
    -0.0078007083250323804, 0.0017677118642540077, 0.044724901770781385, -0.021060292512370848, -0.072637522786376583, 0.33792942172816583, 0.78764114102865100, 0.49105594192797373, -0.048311742585698055, -0.11799011114852003, 0.0034907120842221625, 0.015404109327044824};
constexpr double kLa7[] = {
    0.0026818145682601470, -0.0010473848886797381, -0.012636303403240567, 0.030515513165877886, 0.067892693501220565, -0.049552834937042832, 0.017441255086835707, 0.53610191709056923, 0.76776431700488293, 0.28862963175064787, -0.14004724044293365, -0.10780823770328971, 0.0040102448715223952, 0.010268176708464816};
constexpr double kLa8[] = {
    0.0022733632918431122, 0.0021948620922243666, -0.0078156552217745642, 0.017824408138294089, 0.077518419279700333, 0.030220054998431863, 0.031642421046609507, 0.42836159179395478, 0.76536333778207917, 0.39427525208599511, -0.16084688075464810, -0.19933749673914435, -0.0037430812221492741, 0.036380065082249749, 0.0027148569848873346, -0.0028119562654580798};
constexpr double kLa9[] = {
    0.0010694900329086119, -0.00047315449868004354, -0.010264064027633120, 0.0088592674934002667, 0.062077789302885748, -0.018233770779395506, -0.19155083129728433, 0.035272488035271043, 0.61733844914093415, 0.71789708276441240, 0.23876091460730517, -0.054568958430833351, 0.00058346274612498183, 0.030224878858275188, -0.011528210207679186, -0.013271967781817134, 0.00061978088898550708, 0.0014009155259146562};
constexpr double kLa10[] = {
    -0.00056560372149651908, -0.00054528934562466977, 0.0036255829247859769, 9.4189609798514451e-5, -0.014523370186513243, 0.019572028862964581, 0.082878331629923854, 0.038656882516867710, 0.065700544358319488, 0.45652827917860350, 0.74791029222958164, 0.36158735345352893, -0.19018914666822166, -0.21987021525492687, 0.0082552571131328137, 0.059149188296993175, 0.0046178800367393746, -0.0086910865057560190, -0.00060298652970420379, 0.00062545037409867062};

}  // namespace

std::span<const double> daubechies_lowpass(WaveletFamily family, int vanishing_moments) {
    if (family == WaveletFamily::ExtremalPhase) {
        switch (vanishing_moments) {
            case 1: return {kEp1, 2};
            case 2: return {kEp2, 4};
            case 3: return {kEp3, 6};
            case 4: return {kEp4, 8};
            case 5: return {kEp5, 10};
            case 6: return {kEp6, 12};
            case 7: return {kEp7, 14};
            case 8: return {kEp8, 16};
            case 9: return {kEp9, 18};
            case 10: return {kEp10, 20};
        }
    } else {
        switch (vanishing_moments) {
            case 4: return {kLa4, 8};
            case 5: return {kLa5, 10};
            case 6: return {kLa6, 12};
            case 7: return {kLa7, 14};
            case 8: return {kLa8, 16};
            case 9: return {kLa9, 18};
            case 10: return {kLa10, 20};
        }
    }
    throw std::invalid_argument("no stored coefficients for requested filter");
}

}  // namespace ewspec::detail
