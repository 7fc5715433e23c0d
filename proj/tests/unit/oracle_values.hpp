#pragma once

// Generated by tests/oracle/make_oracles.py (mpmath, 40 digits). Do not edit.
namespace oracle {

inline constexpr double sigma_dc = 0.058857117838173582461;
inline constexpr double sigma_800_re = 0.002240794114515171295;
inline constexpr double sigma_800_im = -0.011263459725388972824;
inline constexpr double sigma_b_re = 0.0022769116747882640596;  // 0.2 eV, 0.5 ps, 77 K, 650 GHz
inline constexpr double sigma_b_im = -0.0046495338437519678269;

inline constexpr double width_800 = 0.000079178397316943783583;
inline constexpr double eps_eff_60 = 7.0546477236774544927;
inline constexpr double length_60 = 0.000040501456736944896245;
inline constexpr double eps_eff_formula = 7.2449522178913439575;
inline constexpr double delta_l_formula = 0.000015828050287237323291;
inline constexpr double length_formula = 0.000037955714451359078292;
inline constexpr double inset_formula = 0.00001325132409743586201;

inline constexpr double fresnel_2p2 = -0.19460050430144568376;
inline constexpr double trentini_0p9_db = 12.787536009528289615;
inline constexpr double dipole_dbi = 1.7609125905568124208;

struct WidthSample {
    double f_r, eps_r, width;
};
inline constexpr WidthSample width_grid[100] = {
    {100000000000.0, 1.0, 0.00149896229},
    {100000000000.0, 2.5, 0.0011331089840011088713},
    {100000000000.0, 4.0, 0.00094802699262036713382},
    {100000000000.0, 5.5, 0.00083147467639721880052},
    {100000000000.0, 7.0, 0.000749481145},
    {100000000000.0, 8.5, 0.00068777106760929565642},
    {100000000000.0, 10.0, 0.00063915966803609254189},
    {100000000000.0, 11.5, 0.000599584916},
    {100000000000.0, 13.0, 0.00056655449200055443564},
    {100000000000.0, 14.5, 0.00053844314964439229298},
    {300000000000.0, 1.0, 0.00049965409666666666667},
    {300000000000.0, 2.5, 0.00037770299466703629042},
    {300000000000.0, 4.0, 0.00031600899754012237794},
    {300000000000.0, 5.5, 0.00027715822546573960017},
    {300000000000.0, 7.0, 0.00024982704833333333333},
    {300000000000.0, 8.5, 0.00022925702253643188547},
    {300000000000.0, 10.0, 0.00021305322267869751396},
    {300000000000.0, 11.5, 0.00019986163866666666667},
    {300000000000.0, 13.0, 0.00018885149733351814521},
    {300000000000.0, 14.5, 0.00017948104988146409766},
    {500000000000.0, 1.0, 0.000299792458},
    {500000000000.0, 2.5, 0.00022662179680022177425},
    {500000000000.0, 4.0, 0.00018960539852407342676},
    {500000000000.0, 5.5, 0.0001662949352794437601},
    {500000000000.0, 7.0, 0.000149896229},
    {500000000000.0, 8.5, 0.00013755421352185913128},
    {500000000000.0, 10.0, 0.00012783193360721850838},
    {500000000000.0, 11.5, 0.0001199169832},
    {500000000000.0, 13.0, 0.00011331089840011088713},
    {500000000000.0, 14.5, 0.0001076886299288784586},
    {700000000000.0, 1.0, 0.00021413747},
    {700000000000.0, 2.5, 0.00016187271200015841018},
    {700000000000.0, 4.0, 0.00013543242751719530483},
    {700000000000.0, 5.5, 0.00011878209662817411436},
    {700000000000.0, 7.0, 0.000107068735},
    {700000000000.0, 8.5, 0.00009825300965847080806},
    {700000000000.0, 10.0, 0.000091308524005156077413},
    {700000000000.0, 11.5, 0.000085654988},
    {700000000000.0, 13.0, 0.000080936356000079205091},
    {700000000000.0, 14.5, 0.000076920449949198898997},
    {900000000000.0, 1.0, 0.00016655136555555555556},
    {900000000000.0, 2.5, 0.00012590099822234543014},
    {900000000000.0, 4.0, 0.00010533633251337412598},
    {900000000000.0, 5.5, 0.000092386075155246533391},
    {900000000000.0, 7.0, 0.000083275682777777777778},
    {900000000000.0, 8.5, 0.000076419007512143961825},
    {900000000000.0, 10.0, 0.000071017740892899171321},
    {900000000000.0, 11.5, 0.000066620546222222222222},
    {900000000000.0, 13.0, 0.000062950499111172715071},
    {900000000000.0, 14.5, 0.00005982701662715469922},
    {1100000000000.0, 1.0, 0.00013626929909090909091},
    {1100000000000.0, 2.5, 0.00010300990763646444284},
    {1100000000000.0, 4.0, 0.000086184272056397012165},
    {1100000000000.0, 5.5, 0.000075588606945201709138},
    {1100000000000.0, 7.0, 0.000068134649545454545455},
    {1100000000000.0, 8.5, 0.000062524642509935968766},
    {1100000000000.0, 10.0, 0.000058105424366917503808},
    {1100000000000.0, 11.5, 0.000054507719636363636364},
    {1100000000000.0, 13.0, 0.000051504953818232221421},
    {1100000000000.0, 14.5, 0.000048949377240399299361},
    {1300000000000.0, 1.0, 0.00011530479153846153846},
    {1300000000000.0, 2.5, 0.000087162229538546836252},
    {1300000000000.0, 4.0, 0.000072925153278489779524},
    {1300000000000.0, 5.5, 0.000063959590492093753886},
    {1300000000000.0, 7.0, 0.000057652395769230769231},
    {1300000000000.0, 8.5, 0.000052905466739176588955},
    {1300000000000.0, 10.0, 0.000049166128310468657068},
    {1300000000000.0, 11.5, 0.000046121916615384615385},
    {1300000000000.0, 13.0, 0.000043581114769273418126},
    {1300000000000.0, 14.5, 0.000041418703818799407152},
    {1500000000000.0, 1.0, 0.000099930819333333333333},
    {1500000000000.0, 2.5, 0.000075540598933407258085},
    {1500000000000.0, 4.0, 0.000063201799508024475588},
    {1500000000000.0, 5.5, 0.000055431645093147920034},
    {1500000000000.0, 7.0, 0.000049965409666666666667},
    {1500000000000.0, 8.5, 0.000045851404507286377095},
    {1500000000000.0, 10.0, 0.000042610644535739502793},
    {1500000000000.0, 11.5, 0.000039972327733333333333},
    {1500000000000.0, 13.0, 0.000037770299466703629042},
    {1500000000000.0, 14.5, 0.000035896209976292819532},
    {1700000000000.0, 1.0, 0.000088174252352941176471},
    {1700000000000.0, 2.5, 0.000066653469647124051251},
    {1700000000000.0, 4.0, 0.000055766293683551007872},
    {1700000000000.0, 5.5, 0.000048910275082189341207},
    {1700000000000.0, 7.0, 0.000044087126176470588235},
    {1700000000000.0, 8.5, 0.000040457121624076215084},
    {1700000000000.0, 10.0, 0.000037597627531534855405},
    {1700000000000.0, 11.5, 0.000035269700941176470588},
    {1700000000000.0, 13.0, 0.000033326734823562025626},
    {1700000000000.0, 14.5, 0.000031673126449670134881},
    {1900000000000.0, 1.0, 0.000078892752105263157895},
    {1900000000000.0, 2.5, 0.000059637314947426782699},
    {1900000000000.0, 4.0, 0.000049896157506335112306},
    {1900000000000.0, 5.5, 0.000043761825073537831606},
    {1900000000000.0, 7.0, 0.000039446376052631578947},
    {1900000000000.0, 8.5, 0.000036198477242594508233},
    {1900000000000.0, 10.0, 0.000033639982528215396941},
    {1900000000000.0, 11.5, 0.000031557100842105263158},
    {1900000000000.0, 13.0, 0.000029818657473713391349},
    {1900000000000.0, 14.5, 0.000028339113139178541736},
};

}  // namespace oracle
